#include "spikelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spikelab {

SpikeSpec::SpikeSpec(std::vector<Spike> spikes) : spikes_(std::move(spikes)) {
  for (std::size_t i = 0; i < spikes_.size(); ++i) {
    if (!(spikes_[i].alpha > 0.0))
      throw std::invalid_argument("SpikeSpec: spike values must be positive");
    if (spikes_[i].multiplicity < 1)
      throw std::invalid_argument("SpikeSpec: multiplicities must be >= 1");
    if (i > 0 && !(spikes_[i].alpha < spikes_[i - 1].alpha))
      throw std::invalid_argument(
          "SpikeSpec: spike values must be strictly descending");
    total_ += spikes_[i].multiplicity;
  }
}

bool SpikedModel::tracked(int spike_index) const {
  const auto& s = spikes.spikes().at(spike_index);
  return !params.in_critical(s.alpha);
}

std::vector<int> bulk_atom_counts(const BulkSpectrum& bulk, int coords) {
  const auto& atoms = bulk.atoms();
  std::vector<int> counts(atoms.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double share = atoms[j].weight * coords;
    counts[j] = static_cast<int>(std::floor(share));
    assigned += counts[j];
    remainders.push_back({share - counts[j], j});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int k = 0; k < coords - assigned; ++k) {
    counts[remainders[k % remainders.size()].second] += 1;
  }
  return counts;
}

namespace {

// per-coordinate standard deviations for the full population vector
std::vector<double> coordinate_scales(const SpikedModel& model, int p) {
  const int m = model.spikes.total_multiplicity();
  std::vector<double> scales;
  scales.reserve(p);
  for (const auto& s : model.spikes.spikes()) {
    for (int i = 0; i < s.multiplicity; ++i) scales.push_back(std::sqrt(s.alpha));
  }
  const auto counts = bulk_atom_counts(model.bulk, p - m);
  const auto& atoms = model.bulk.atoms();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    for (int i = 0; i < counts[j]; ++i) scales.push_back(std::sqrt(atoms[j].value));
  }
  return scales;
}

}  // namespace

DataMatrix sample_data(const SpikedModel& model, int p, int n, RngStream& rng) {
  const int m = model.spikes.total_multiplicity();
  if (p < m) {
    throw std::invalid_argument("sample_data: p = " + std::to_string(p) +
                                " is smaller than the spike dimension M = " +
                                std::to_string(m));
  }
  if (model.rotation && (model.rotation->rows() != m || model.rotation->cols() != m)) {
    throw std::invalid_argument("sample_data: rotation must be M x M");
  }

  const auto scales = coordinate_scales(model, p);

  DataMatrix out;
  out.p = p;
  out.n = n;
  out.is_complex = model.entry.is_complex;

  if (!out.is_complex) {
    out.real.resize(p, n);
    const bool binary = model.entry.family == EntryFamily::Rademacher;
    for (int col = 0; col < n; ++col) {
      for (int row = 0; row < p; ++row) {
        const double e = binary ? rng.next_rademacher() : rng.next_gaussian();
        out.real(row, col) = scales[row] * e;
      }
    }
    if (model.rotation) {
      out.real.topRows(m) = (*model.rotation) * out.real.topRows(m);
    }
  } else {
    out.complex.resize(p, n);
    const double half = 1.0 / std::sqrt(2.0);
    for (int col = 0; col < n; ++col) {
      for (int row = 0; row < p; ++row) {
        const double re = rng.next_gaussian();
        const double im = rng.next_gaussian();
        out.complex(row, col) =
            scales[row] * std::complex<double>(re * half, im * half);
      }
    }
    if (model.rotation) {
      out.complex.topRows(m) =
          model.rotation->cast<std::complex<double>>() * out.complex.topRows(m);
    }
  }
  return out;
}

Eigen::MatrixXd sample_cov(const DataMatrix& data) {
  if (data.is_complex)
    throw std::invalid_argument("sample_cov: data is complex");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(data.p, data.p);
  s.selfadjointView<Eigen::Lower>().rankUpdate(data.real, 1.0 / data.n);
  s.triangularView<Eigen::StrictlyUpper>() =
      s.triangularView<Eigen::StrictlyLower>().transpose();
  return s;
}

Eigen::MatrixXcd sample_cov_complex(const DataMatrix& data) {
  if (!data.is_complex)
    throw std::invalid_argument("sample_cov_complex: data is real");
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(data.p, data.p);
  s.selfadjointView<Eigen::Lower>().rankUpdate(data.complex, 1.0 / data.n);
  s.triangularView<Eigen::StrictlyUpper>() =
      s.triangularView<Eigen::StrictlyLower>().adjoint();
  return s;
}

std::map<int, std::vector<int>> packed_index_sets(const SpikeSpec& spec,
                                                  const MpParams& params,
                                                  int p) {
  std::map<int, std::vector<int>> out;
  const auto& spikes = spec.spikes();

  int s_acc = 0;  // cumulative multiplicity of spikes above, top down
  for (std::size_t k = 0; k < spikes.size(); ++k) {
    if (spikes[k].alpha > params.critical_high()) {
      std::vector<int> idx;
      for (int j = s_acc + 1; j <= s_acc + spikes[k].multiplicity; ++j)
        idx.push_back(j);
      s_acc += spikes[k].multiplicity;
      out[static_cast<int>(k)] = std::move(idx);
    }
  }

  int t_acc = 0;  // cumulative multiplicity of spikes below, bottom up
  for (std::size_t r = spikes.size(); r-- > 0;) {
    if (spikes[r].alpha < params.critical_low()) {
      std::vector<int> idx;
      const int t_prev = t_acc;
      t_acc += spikes[r].multiplicity;
      for (int j = p - t_acc + 1; j <= p - t_prev; ++j) idx.push_back(j);
      out[static_cast<int>(r)] = std::move(idx);
    }
  }

  for (std::size_t k = 0; k < spikes.size(); ++k) {
    if (params.in_critical(spikes[k].alpha)) {
      out[static_cast<int>(k)] = {};
    }
  }
  return out;
}

}  // namespace spikelab
