#include "spikelab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spikelab/linalg.hpp"

namespace spikelab {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 2)
    throw std::invalid_argument("ExperimentConfig: replications must be >= 2");
  if (p < model.spikes.total_multiplicity())
    throw std::invalid_argument("ExperimentConfig: p smaller than spike block");
  if (n < 1) throw std::invalid_argument("ExperimentConfig: n must be >= 1");
  if (rep_begin < 0)
    throw std::invalid_argument("ExperimentConfig: rep_begin must be >= 0");
  for (int k : tracked_or_default()) {
    if (k < 0 || k >= model.spikes.count())
      throw std::invalid_argument("ExperimentConfig: tracked spike out of range");
    if (!model.tracked(k)) {
      throw std::invalid_argument(
          "ExperimentConfig: spike " + std::to_string(k + 1) +
          " lies inside the critical interval and cannot be tracked");
    }
  }
}

std::vector<int> ExperimentConfig::tracked_or_default() const {
  if (!tracked.empty()) return tracked;
  std::vector<int> out;
  for (int k = 0; k < model.spikes.count(); ++k) {
    if (model.tracked(k)) out.push_back(k);
  }
  return out;
}

std::string ExperimentConfig::digest() const {
  std::ostringstream ss;
  ss << "y=" << format_double(model.params.y()) << ";spikes=";
  for (const auto& s : model.spikes.spikes())
    ss << format_double(s.alpha) << "x" << s.multiplicity << ",";
  ss << ";bulk=";
  for (const auto& a : model.bulk.atoms())
    ss << format_double(a.value) << ":" << format_double(a.weight) << ",";
  ss << ";entry=" << static_cast<int>(model.entry.family)
     << (model.entry.is_complex ? "c" : "r") << format_double(model.entry.beta)
     << ";p=" << p << ";n=" << n << ";seed=" << master_seed;
  ss << ";tracked=";
  for (int k : tracked_or_default()) ss << k << ",";

  // FNV-1a over the canonical serialization
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : ss.str()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string DeltaColumn::label() const {
  return "k" + std::to_string(spike_index + 1) + "_j" + std::to_string(j);
}

std::vector<double> ReplicationSet::column(int c) const {
  std::vector<double> out(deltas.rows());
  for (int r = 0; r < deltas.rows(); ++r) out[r] = deltas(r, c);
  return out;
}

std::vector<DeltaColumn> tracked_columns(const ExperimentConfig& config) {
  const auto& spikes = config.model.spikes.spikes();
  const auto& params = config.model.params;
  const bool unit_bulk = config.model.bulk.is_unit();
  const auto bulk_counts = bulk_atom_counts(
      config.model.bulk, config.p - config.model.spikes.total_multiplicity());
  const auto& atoms = config.model.bulk.atoms();

  std::vector<DeltaColumn> out;
  for (int k : config.tracked_or_default()) {
    const double alpha = spikes[k].alpha;

    double center;
    if (unit_bulk) {
      center = phi(alpha, params);
    } else {
      const PsiResult r = psi(alpha, params, config.model.bulk);
      if (!r.separated) {
        throw std::invalid_argument(
            "tracked_columns: psi(" + std::to_string(alpha) +
            ") falls inside the support; the spike is not separated");
      }
      center = r.value;
    }

    // population-eigenvalue rank of the spike block
    int above = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (atoms[j].value > alpha) above += bulk_counts[j];
    }
    for (const auto& s : spikes) {
      if (s.alpha > alpha) above += s.multiplicity;
    }
    for (int m = 0; m < spikes[k].multiplicity; ++m) {
      DeltaColumn col;
      col.spike_index = k;
      col.j = above + m + 1;
      col.center = center;
      col.alpha = alpha;
      col.multiplicity = spikes[k].multiplicity;
      out.push_back(col);
    }
  }
  return out;
}

ReplicationSet run_replications(const ExperimentConfig& config) {
  config.validate();
  const auto columns = tracked_columns(config);
  const int reps = config.replications;
  const int cols = static_cast<int>(columns.size());

  ReplicationSet out;
  out.columns = columns;
  out.lambdas.resize(reps, cols);
  out.deltas.resize(reps, cols);
  out.rep_indices.resize(reps);
  out.rep_seeds.resize(reps);
  out.p = config.p;
  out.n = config.n;
  out.master_seed = config.master_seed;
  out.config_digest = config.digest();

  const double sqrt_n = std::sqrt(static_cast<double>(config.n));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string failure;

  auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps || failed.load()) break;
      const int rep_index = config.rep_begin + r;
      try {
        RngStream stream = RngStream::derived(config.master_seed,
                                              static_cast<std::uint64_t>(rep_index));
        out.rep_indices[r] = rep_index;
        out.rep_seeds[r] =
            mix64(config.master_seed +
                  0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(rep_index) + 1));
        const DataMatrix data = sample_data(config.model, config.p, config.n, stream);
        const EigenSample eigs =
            data.is_complex ? hermitian_eigs(sample_cov_complex(data))
                            : hermitian_eigs(sample_cov(data));
        for (int c = 0; c < cols; ++c) {
          const double lam = eigs.values.at(columns[c].j - 1);
          out.lambdas(r, c) = lam;
          out.deltas(r, c) = sqrt_n * (lam - columns[c].center);
        }
      } catch (const std::exception& e) {
        if (!failed.exchange(true)) {
          failure = "replication " + std::to_string(rep_index) + " (seed " +
                    std::to_string(out.rep_seeds[r]) + "): " + e.what();
        }
        break;
      }
    }
  };

  int nthreads = config.threads > 0
                     ? config.threads
                     : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, reps));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("run_replications: " + failure);
  return out;
}

ReplicationSet merge_replications(const ReplicationSet& a,
                                  const ReplicationSet& b) {
  if (a.config_digest != b.config_digest)
    throw std::invalid_argument("merge_replications: configs differ");
  for (int ia : a.rep_indices)
    for (int ib : b.rep_indices)
      if (ia == ib)
        throw std::invalid_argument(
            "merge_replications: overlapping replication indices");

  ReplicationSet out = a;
  const int ra = a.count(), rb = b.count();
  out.lambdas.conservativeResize(ra + rb, Eigen::NoChange);
  out.deltas.conservativeResize(ra + rb, Eigen::NoChange);
  out.lambdas.bottomRows(rb) = b.lambdas;
  out.deltas.bottomRows(rb) = b.deltas;
  out.rep_indices.insert(out.rep_indices.end(), b.rep_indices.begin(),
                         b.rep_indices.end());
  out.rep_seeds.insert(out.rep_seeds.end(), b.rep_seeds.begin(),
                       b.rep_seeds.end());

  // canonical row order by replication index
  std::vector<int> order(out.rep_indices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return out.rep_indices[x] < out.rep_indices[y];
  });
  ReplicationSet sorted = out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.lambdas.row(i) = out.lambdas.row(order[i]);
    sorted.deltas.row(i) = out.deltas.row(order[i]);
    sorted.rep_indices[i] = out.rep_indices[order[i]];
    sorted.rep_seeds[i] = out.rep_seeds[order[i]];
  }
  return sorted;
}

// ---------------------------------------------------------------------------
// goodness of fit

GofThresholds GofThresholds::for_mode(ExperimentConfig::Mode mode,
                                      const EntryLaw& entry) {
  GofThresholds t;
  if (mode == ExperimentConfig::Mode::PaperScale) {
    t.variance_tol = 0.10;
  } else {
    t.variance_tol = entry.family == EntryFamily::Rademacher ? 0.25 : 0.20;
  }
  return t;
}

namespace {

double normal_cdf(double x, double sd) {
  return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0)));
}

}  // namespace

GofReport compare_to_limit(const ReplicationSet& reps,
                           const std::map<int, LimitLaw>& laws, RngStream& rng,
                           const GofThresholds& thresholds, int law_draws) {
  GofReport report;

  std::map<int, std::vector<int>> group_cols;
  for (int c = 0; c < static_cast<int>(reps.columns.size()); ++c)
    group_cols[reps.columns[c].spike_index].push_back(c);

  for (const auto& [k, cols] : group_cols) {
    const auto it = laws.find(k);
    if (it == laws.end())
      throw std::invalid_argument("compare_to_limit: no law for spike " +
                                  std::to_string(k + 1));
    const LimitLaw& law = it->second;
    if (law.block != static_cast<int>(cols.size()))
      throw std::invalid_argument(
          "compare_to_limit: law block size does not match column group");

    if (law.kind == LimitLaw::Kind::ScalarGaussian) {
      const double sd = std::sqrt(law.scalar_variance());
      const auto sample = reps.column(cols[0]);
      const auto [d, p] =
          ks_test(sample, [sd](double x) { return normal_cdf(x, sd); });
      const ColumnSummary s = summarize(sample);
      const bool pass = p >= thresholds.p_min &&
                        std::abs(s.variance / law.scalar_variance() - 1.0) <=
                            thresholds.variance_tol &&
                        std::abs(s.mean) <= thresholds.mean_tol_sigmas * sd;
      GofColumn row;
      row.column = reps.columns[cols[0]].label();
      row.ks_stat = d;
      row.p_value = p;
      row.emp_mean = s.mean;
      row.emp_var = s.variance;
      row.verdict = pass ? "pass" : "fail";
      report.columns.push_back(row);
      report.all_pass = report.all_pass && pass;
    } else {
      const auto draws = sample_limit_law(law, law_draws, rng);
      // per ordered coordinate: two-sample KS against the law draws
      for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
        std::vector<double> ref(draws.size());
        for (std::size_t d = 0; d < draws.size(); ++d) ref[d] = draws[d][c];
        const auto sample = reps.column(cols[c]);
        const auto [d, p] = ks_test(sample, ref);
        const ColumnSummary s = summarize(sample);
        const bool pass = p >= thresholds.p_min;
        GofColumn row;
        row.column = reps.columns[cols[c]].label();
        row.ks_stat = d;
        row.p_value = p;
        row.emp_mean = s.mean;
        row.emp_var = s.variance;
        row.verdict = pass ? "pass" : "fail";
        report.columns.push_back(row);
        report.all_pass = report.all_pass && pass;
      }
      // trace statistic: var(sum of deltas) against block * scale^2 * diag_var
      std::vector<double> trace(reps.count(), 0.0);
      for (int r = 0; r < reps.count(); ++r)
        for (int c : cols) trace[r] += reps.deltas(r, c);
      const ColumnSummary ts = summarize(trace);
      const double trace_var =
          law.block * law.scale * law.scale * law.diag_var;
      const bool pass =
          std::abs(ts.variance / trace_var - 1.0) <= thresholds.variance_tol;
      GofColumn row;
      row.column = "k" + std::to_string(k + 1) + "_trace";
      row.ks_stat = 0.0;
      row.p_value = 1.0;
      row.emp_mean = ts.mean;
      row.emp_var = ts.variance;
      row.verdict = pass ? "pass" : "fail";
      report.columns.push_back(row);
      report.all_pass = report.all_pass && pass;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// file emission

void write_replications_csv(const ReplicationSet& reps, std::ostream& os) {
  os << "rep,spike_k,j,lambda,delta\n";
  for (int r = 0; r < reps.count(); ++r) {
    for (int c = 0; c < static_cast<int>(reps.columns.size()); ++c) {
      os << reps.rep_indices[r] << ',' << reps.columns[c].spike_index + 1 << ','
         << reps.columns[c].j << ',' << format_double(reps.lambdas(r, c)) << ','
         << format_double(reps.deltas(r, c)) << '\n';
    }
  }
}

void write_gof_json(const GofReport& report, std::ostream& os) {
  os << "{\n  \"all_pass\": " << (report.all_pass ? "true" : "false")
     << ",\n  \"columns\": [\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    const auto& c = report.columns[i];
    os << "    {\"column\": \"" << c.column << "\", \"ks_stat\": "
       << format_double(c.ks_stat) << ", \"p_value\": " << format_double(c.p_value)
       << ", \"emp_mean\": " << format_double(c.emp_mean)
       << ", \"emp_var\": " << format_double(c.emp_var) << ", \"verdict\": \""
       << c.verdict << "\"}";
    os << (i + 1 < report.columns.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
}

void write_kde_csv(const KdeGrid& grid, std::ostream& os) {
  os << "x,density\n";
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    os << format_double(grid.x[i]) << ',' << format_double(grid.density[i])
       << '\n';
}

void write_kde2_csv(const Kde2Grid& grid, std::ostream& os) {
  os << "x,y,density\n";
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    for (std::size_t j = 0; j < grid.y.size(); ++j)
      os << format_double(grid.x[i]) << ',' << format_double(grid.y[j]) << ','
         << format_double(grid.density(i, j)) << '\n';
}

}  // namespace spikelab
