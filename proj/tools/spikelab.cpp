// spikelab: analytics, seeded simulation and spike inference for spiked
// sample covariance models.
//
// Exit codes: 0 success, 1 statistical failure, 2 critical-interval
// violation, 64 usage/config error, 65 data format error, 66 unreadable
// input file.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "spikelab/infer.hpp"
#include "spikelab/limits.hpp"
#include "spikelab/linalg.hpp"
#include "spikelab/montecarlo.hpp"
#include "spikelab/verify.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace spikelab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStatFail = 1;
constexpr int kExitCritical = 2;
constexpr int kExitUsage = 64;
constexpr int kExitDataErr = 65;
constexpr int kExitNoInput = 66;

EntryLaw entry_from_name(const std::string& name, double beta) {
  if (name == "gaussian") return EntryLaw::gaussian();
  if (name == "binary" || name == "rademacher") return EntryLaw::rademacher();
  if (name == "custom") return EntryLaw::custom(beta);
  throw std::invalid_argument("unknown entry family: " + name);
}

BulkSpectrum bulk_from_flags(const std::vector<std::string>& specs) {
  if (specs.empty()) return BulkSpectrum::unit();
  std::vector<BulkAtom> atoms;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--bulk expects value:weight, got " + s);
    atoms.push_back(
        {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))});
  }
  return BulkSpectrum(atoms);
}

// ---------------------------------------------------------------------------
// limits

int cmd_limits(double y, const std::vector<double>& alphas,
               const std::vector<std::string>& bulk_specs,
               const std::string& entry_name) {
  const MpParams params(y);
  const BulkSpectrum bulk = bulk_from_flags(bulk_specs);
  const EntryLaw entry = entry_from_name(entry_name, 0.0);
  const bool unit = bulk.is_unit();

  for (double alpha : alphas) {
    if (params.in_critical(alpha)) {
      std::cerr << "spike alpha = " << alpha
                << " lies inside the critical interval ["
                << params.critical_low() << ", " << params.critical_high()
                << "]: no outlier eigenvalue exists there\n";
      return kExitCritical;
    }
  }

  json out;
  out["y"] = y;
  out["entry"] = entry_name;
  out["critical_interval"] = {params.critical_low(), params.critical_high()};
  const SupportSet support = general_support(params, bulk);
  json sup = json::array();
  for (const auto& [lo, hi] : support.intervals) sup.push_back({lo, hi});
  out["support"] = sup;

  json spikes = json::array();
  json sigma2_list = json::array();
  for (double alpha : alphas) {
    json row;
    row["alpha"] = alpha;
    if (unit) {
      row["center"] = phi(alpha, params);
      const auto m = m_closed_forms(alpha, params);
      row["m1"] = m.m1;
      row["m2"] = m.m2;
      row["m3"] = m.m3;
      const double variance = entry.family == EntryFamily::Rademacher
                                  ? s2_binary(alpha, params)
                                  : sigma2(alpha, params);
      row["sigma2"] = variance;
      sigma2_list.push_back(variance);
      row["separated"] = true;
    } else {
      const auto r = psi(alpha, params, bulk);
      row["center"] = r.value;
      row["separated"] = r.separated;
    }
    spikes.push_back(row);
  }
  out["spikes"] = spikes;
  if (unit) out["sigma2"] = sigma2_list;

  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateSettings {
  ExperimentConfig config;
  GofThresholds thresholds;
  bool emit_kde = true;
};

SimulateSettings parse_simulate_config(const json& doc) {
  static const std::set<std::string> known = {
      "y",       "spikes",      "bulk",        "entry",
      "beta",    "complex",     "p",           "n",
      "replications", "rep_begin", "tracked",  "master_seed",
      "mode",    "emit_kde",    "ks_p_min",    "variance_tol",
      "mean_tol_sigmas", "threads"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!known.count(key))
      throw std::invalid_argument("unknown config key: " + key);
  }
  for (const char* req : {"y", "spikes", "p", "n", "replications", "master_seed"})
    if (!doc.contains(req))
      throw std::invalid_argument(std::string("missing config key: ") + req);

  const MpParams params(doc.at("y").get<double>());

  std::vector<Spike> spikes;
  for (const auto& s : doc.at("spikes")) {
    spikes.push_back({s.at("alpha").get<double>(), s.value("multiplicity", 1)});
  }

  BulkSpectrum bulk = BulkSpectrum::unit();
  if (doc.contains("bulk")) {
    std::vector<BulkAtom> atoms;
    for (const auto& a : doc.at("bulk"))
      atoms.push_back({a.at("value").get<double>(), a.at("weight").get<double>()});
    bulk = BulkSpectrum(atoms);
  }

  EntryLaw entry = EntryLaw::gaussian();
  const std::string entry_name = doc.value("entry", std::string("gaussian"));
  if (entry_name == "binary" || entry_name == "rademacher")
    entry = EntryLaw::rademacher();
  else if (entry_name == "custom")
    entry = EntryLaw::custom(doc.value("beta", 0.0));
  else if (entry_name != "gaussian")
    throw std::invalid_argument("unknown entry family: " + entry_name);
  if (doc.value("complex", false)) {
    if (entry.family != EntryFamily::Gaussian)
      throw std::invalid_argument("complex entries require the gaussian family");
    entry.is_complex = true;
  }

  SimulateSettings out{
      ExperimentConfig{SpikedModel(SpikeSpec(spikes), bulk, entry, params),
                       doc.at("p").get<int>(), doc.at("n").get<int>()},
      GofThresholds{}, true};
  out.config.replications = doc.at("replications").get<int>();
  out.config.rep_begin = doc.value("rep_begin", 0);
  out.config.master_seed = doc.at("master_seed").get<std::uint64_t>();
  if (doc.contains("tracked")) {
    for (int k : doc.at("tracked").get<std::vector<int>>())
      out.config.tracked.push_back(k - 1);  // 1-based in the file
  }
  const std::string mode = doc.value("mode", std::string("fast"));
  if (mode == "paper_scale")
    out.config.mode = ExperimentConfig::Mode::PaperScale;
  else if (mode != "fast")
    throw std::invalid_argument("unknown mode: " + mode);
  out.config.threads = doc.value("threads", 0);

  out.thresholds = GofThresholds::for_mode(out.config.mode, entry);
  if (doc.contains("ks_p_min")) out.thresholds.p_min = doc.at("ks_p_min");
  if (doc.contains("variance_tol"))
    out.thresholds.variance_tol = doc.at("variance_tol");
  if (doc.contains("mean_tol_sigmas"))
    out.thresholds.mean_tol_sigmas = doc.at("mean_tol_sigmas");
  out.emit_kde = doc.value("emit_kde", true);
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int threads_override) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read config file: " << config_path << "\n";
    return kExitNoInput;
  }
  SimulateSettings settings{
      ExperimentConfig{SpikedModel(SpikeSpec({}), BulkSpectrum::unit(),
                                   EntryLaw::gaussian(), MpParams(0.5)),
                       0, 0},
      GofThresholds{}, true};
  try {
    json doc = json::parse(in);
    settings = parse_simulate_config(doc);
    if (threads_override > 0) settings.config.threads = threads_override;
    if (const char* env_seed = std::getenv("SPIKELAB_SEED")) {
      settings.config.master_seed = std::stoull(env_seed);
    }
    settings.config.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    fs::create_directories(out_dir);
    const auto reps = run_replications(settings.config);

    {
      std::ofstream csv(fs::path(out_dir) / "replications.csv",
                        std::ios::binary);
      write_replications_csv(reps, csv);
    }

    // limit laws exist for the unit bulk; gapped bulks get summary-only rows
    GofReport report;
    const bool unit = settings.config.model.bulk.is_unit();
    if (unit) {
      std::map<int, LimitLaw> laws;
      for (int k : settings.config.tracked_or_default()) {
        const auto& s = settings.config.model.spikes.spikes()[k];
        laws[k] =
            limit_law(s.alpha, s.multiplicity, settings.config.model.params,
                      settings.config.model.entry);
      }
      RngStream gof_rng =
          RngStream::derived(settings.config.master_seed, 0xC0FFEEULL);
      report = compare_to_limit(reps, laws, gof_rng, settings.thresholds);
    } else {
      for (int c = 0; c < static_cast<int>(reps.columns.size()); ++c) {
        const auto s = summarize(reps.column(c));
        GofColumn row;
        row.column = reps.columns[c].label();
        row.emp_mean = s.mean;
        row.emp_var = s.variance;
        row.verdict = "skipped";
        report.columns.push_back(row);
      }
    }
    {
      std::ofstream jf(fs::path(out_dir) / "gof.json", std::ios::binary);
      write_gof_json(report, jf);
    }

    if (settings.emit_kde && reps.count() >= 30) {
      std::map<int, std::vector<int>> groups;
      for (int c = 0; c < static_cast<int>(reps.columns.size()); ++c)
        groups[reps.columns[c].spike_index].push_back(c);
      for (const auto& [k, cols] : groups) {
        for (int c : cols) {
          const auto grid = kde(reps.column(c));
          std::ofstream f(fs::path(out_dir) /
                              ("kde_" + reps.columns[c].label() + ".csv"),
                          std::ios::binary);
          write_kde_csv(grid, f);
        }
        if (cols.size() == 2) {
          std::vector<std::array<double, 2>> pairs(reps.count());
          for (int r = 0; r < reps.count(); ++r)
            pairs[r] = {reps.deltas(r, cols[0]), reps.deltas(r, cols[1])};
          const auto grid = kde2(pairs);
          std::ofstream f(fs::path(out_dir) /
                              ("kde2_k" + std::to_string(k + 1) + ".csv"),
                          std::ios::binary);
          write_kde2_csv(grid, f);
        }
      }
    }
    return report.all_pass ? kExitOk : kExitStatFail;
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// infer

int cmd_infer(const std::string& spectrum_path, double y, int n,
              const std::string& variance_model, double beta,
              double confidence) {
  std::ifstream in(spectrum_path);
  if (!in) {
    std::cerr << "cannot read spectrum file: " << spectrum_path << "\n";
    return kExitNoInput;
  }
  std::vector<double> eigs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      const double v = std::stod(line.substr(start));
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
      eigs.push_back(v);
    } catch (const std::exception&) {
      std::cerr << "bad eigenvalue on line " << line_no << ": " << line << "\n";
      return kExitDataErr;
    }
  }
  std::sort(eigs.rbegin(), eigs.rend());

  try {
    const MpParams params(y);
    const EntryLaw entry = entry_from_name(variance_model, beta);
    const auto candidates = detect_spikes(eigs, params, BulkSpectrum::unit());

    json arr = json::array();
    for (const auto& c : candidates) {
      const auto est = estimate_spike(c.lambda, n, params, entry, confidence);
      json row;
      row["alpha_hat"] = est.alpha_hat;
      row["lambda_observed"] = est.lambda_observed;
      row["side"] = est.side == Side::Above ? "above" : "below";
      row["ci"] = {est.ci_lo, est.ci_hi};
      row["lambda_ci"] = {est.lambda_ci_lo, est.lambda_ci_hi};
      row["confidence"] = est.confidence;
      row["variance_model"] = est.variance_model;
      arr.push_back(row);
    }
    json out;
    out["estimates"] = arr;
    out["clusters"] = cluster_candidates(candidates, n, params, entry);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "inference error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckRow> rows;
  if (suite == "identities") {
    rows = verify_identities();
  } else if (suite == "lemma61") {
    rows = verify_lemma61(seed);
  } else if (suite == "sesquiform") {
    rows = verify_sesquiform(seed);
  } else {
    std::cerr << "unknown suite: " << suite
              << " (expected identities|lemma61|sesquiform)\n";
    return kExitUsage;
  }
  bool all = true;
  std::printf("%-46s %14s %14s %12s  %s\n", "check", "value", "reference",
              "tolerance", "status");
  for (const auto& r : rows) {
    std::printf("%-46s %14.6g %14.6g %12.3g  %s\n", r.name.c_str(), r.value,
                r.reference, r.tolerance, r.pass ? "pass" : "FAIL");
    all = all && r.pass;
  }
  return all ? kExitOk : kExitStatFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiked covariance eigenvalue laboratory"};
  app.require_subcommand(1);

  auto* limits_cmd =
      app.add_subcommand("limits", "analytic spike maps, variances, support");
  double y = 0.5;
  std::vector<double> alphas;
  std::vector<std::string> bulk_specs;
  std::string entry_name = "gaussian";
  limits_cmd->add_option("--y", y, "dimension-to-sample ratio")->required();
  limits_cmd->add_option("--alpha", alphas, "spike eigenvalue (repeatable)");
  limits_cmd->add_option("--bulk", bulk_specs,
                         "bulk atom value:weight (repeatable)");
  limits_cmd->add_option("--entry", entry_name, "entry family")
      ->check(CLI::IsMember({"gaussian", "binary"}));

  auto* sim_cmd = app.add_subcommand("simulate", "seeded replication runs");
  std::string config_path, out_dir;
  int threads = 0;
  sim_cmd->add_option("--config", config_path, "JSON experiment config")
      ->required();
  sim_cmd->add_option("--out", out_dir, "output directory")->required();
  sim_cmd->add_option("--threads", threads, "worker thread cap");

  auto* infer_cmd =
      app.add_subcommand("infer", "estimate spikes from a spectrum CSV");
  std::string spectrum_path, variance_model = "gaussian";
  double infer_y = 0.5, beta = 0.0, confidence = 0.95;
  int infer_n = 0;
  infer_cmd->add_option("spectrum", spectrum_path, "eigenvalues, one per line")
      ->required();
  infer_cmd->add_option("--y", infer_y, "dimension-to-sample ratio")->required();
  infer_cmd->add_option("--n", infer_n, "sample size")->required();
  infer_cmd->add_option("--variance-model", variance_model, "variance model")
      ->check(CLI::IsMember({"gaussian", "binary", "custom"}));
  infer_cmd->add_option("--beta", beta, "fourth-moment parameter for custom");
  infer_cmd->add_option("--confidence", confidence, "confidence level");

  auto* verify_cmd = app.add_subcommand("verify", "run an oracle battery");
  std::string suite;
  std::uint64_t verify_seed = 0xBA1;
  verify_cmd->add_option("--suite", suite, "identities|lemma61|sesquiform")
      ->required();
  verify_cmd->add_option("--seed", verify_seed, "battery master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (limits_cmd->parsed())
      return cmd_limits(y, alphas, bulk_specs, entry_name);
    if (sim_cmd->parsed()) return cmd_simulate(config_path, out_dir, threads);
    if (infer_cmd->parsed())
      return cmd_infer(spectrum_path, infer_y, infer_n, variance_model, beta,
                       confidence);
    if (verify_cmd->parsed()) return cmd_verify(suite, verify_seed);
  } catch (const CriticalIntervalError& e) {
    std::cerr << e.what() << "\n";
    return kExitCritical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
