#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbinom/error.hpp"
#include "qbinom/qlin/complex_matrix.hpp"
#include "qbinom/qlin/spectral.hpp"
#include "qbinom/qmodel/density.hpp"
#include "qbinom/qmodel/detection.hpp"
#include "qbinom/qmodel/model.hpp"

namespace qbinom::qoracle {

using qlin::AtomOperator;
using qlin::ComplexMatrix;
using qlin::cplx;
using qmodel::DensityMatrix;
using qmodel::Detection;
using qmodel::Plant;

inline constexpr double kNullProbability = 1e-14;
inline constexpr std::size_t kMaxFullSpaceSteps = 11;

using Record = std::vector<std::uint8_t>;

// Control u_l as a function of the record prefix omega_1..omega_{l-1}. Empty means u = 0.
using RecordStrategy = std::function<double(std::span<const std::uint8_t> prefix)>;

struct DetectionBasis {
  std::array<std::array<cplx, 2>, 2> vectors;  // vectors[o] is the slice vector of outcome o
  std::array<double, 2> values;
};

inline DetectionBasis detection_basis(Detection d, double lambda) {
  if (d == Detection::counting) return {{{{0.0, 1.0}, {1.0, 0.0}}}, {0.0, 1.0}};
  const double r = 1.0 / std::sqrt(2.0);
  return {{{{r, -r}, {r, r}}}, {-lambda, lambda}};
}

// K_o = <e_o| M |Phi> with Phi the slice ground state (index 1).
inline std::array<AtomOperator, 2> kraus_operators(const ComplexMatrix& m, Detection d) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("kraus_operators: expected a 4x4 step unitary");
  const DetectionBasis basis = detection_basis(d, 1.0);
  std::array<AtomOperator, 2> k;
  for (int o = 0; o < 2; ++o)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        cplx v = 0.0;
        for (int s = 0; s < 2; ++s) {
          v += std::conj(basis.vectors[o][s]) * m(static_cast<std::size_t>(2 * a + s), static_cast<std::size_t>(2 * b + 1));
        }
        k[o](a, b) = v;
      }
  return k;
}

inline std::array<AtomOperator, 2> kraus_operators(const qmodel::ModelCoefficients& c, Detection d) {
  return kraus_operators(qmodel::reconstruct_unitary(c), d);
}

struct RecordEntry {
  Record record;
  double probability = 0.0;
  std::optional<DensityMatrix> state;  // absent on null records
};

struct RecordTable {
  std::size_t length = 0;
  Detection detection = Detection::homodyne;
  std::vector<RecordEntry> entries;  // lexicographic record order

  double total_probability() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.probability;
    return s;
  }
  const RecordEntry* find(const Record& r) const {
    for (const auto& e : entries)
      if (e.record == r) return &e;
    return nullptr;
  }
};

struct ChainResult {
  double probability = 0.0;
  std::optional<DensityMatrix> state;
};

namespace detail {

inline double control_for(const RecordStrategy& strategy, std::span<const std::uint8_t> prefix) {
  return strategy ? strategy(prefix) : 0.0;
}

// Kraus pairs memoized by control value.
class KrausCache {
 public:
  KrausCache(const Plant& plant, Detection d) : plant_(plant), d_(d) {}
  const std::array<AtomOperator, 2>& at(double u) {
    const double key = plant_.is_controlled() ? u : 0.0;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, kraus_operators(plant_.unitary(key), d_)).first;
    return it->second;
  }

 private:
  const Plant& plant_;
  Detection d_;
  std::map<double, std::array<AtomOperator, 2>> cache_;
};

inline std::optional<DensityMatrix> conditional(const AtomOperator& varrho, double probability) {
  if (probability < kNullProbability) return std::nullopt;
  return DensityMatrix::normalize(varrho * (1.0 / probability));
}

}  // namespace detail

// Unnormalized K_{w_l}...K_{w_1} rho0 K*_{w_1}...K*_{w_l}; probability is its trace.
inline ChainResult kraus_chain(const Plant& plant, const RecordStrategy& strategy, Detection d, const Record& record,
                               const DensityMatrix& rho0) {
  if (record.size() > plant.grid().k()) throw DomainError("kraus_chain: record longer than the horizon");
  detail::KrausCache cache(plant, d);
  AtomOperator varrho = rho0.op();
  for (std::size_t l = 0; l < record.size(); ++l) {
    if (record[l] > 1) throw DomainError("kraus_chain: outcomes must be 0 or 1");
    const double u = detail::control_for(strategy, std::span<const std::uint8_t>(record.data(), l));
    const AtomOperator& k = cache.at(u)[record[l]];
    varrho = k * varrho * k.adjoint();
  }
  const double p = varrho.trace().real();
  return {p, detail::conditional(varrho, p)};
}

// Depth-first enumeration of all length-k records with pruning of null branches.
inline RecordTable enumerate_records(const Plant& plant, const RecordStrategy& strategy, Detection d, std::size_t k,
                                     const DensityMatrix& rho0) {
  if (k > plant.grid().k()) throw DomainError("enumerate_records: k exceeds the horizon");
  detail::KrausCache cache(plant, d);
  RecordTable table{k, d, {}};
  Record prefix;
  std::function<void(const AtomOperator&)> visit = [&](const AtomOperator& varrho) {
    const double p = varrho.trace().real();
    if (prefix.size() == k) {
      table.entries.push_back({prefix, p, detail::conditional(varrho, p)});
      return;
    }
    const double u = detail::control_for(strategy, prefix);
    const auto& kraus = cache.at(u);
    for (std::uint8_t o = 0; o < 2; ++o) {
      const AtomOperator next = kraus[o] * varrho * kraus[o].adjoint();
      if (next.trace().real() < kNullProbability) continue;
      prefix.push_back(o);
      visit(next);
      prefix.pop_back();
    }
  };
  visit(rho0.op());
  return table;
}

namespace detail {

// Mixture {(weight, vector)} of the eigen-decomposition of rho0, zero weights dropped.
inline std::vector<std::pair<double, std::array<cplx, 2>>> eigen_mixture(const DensityMatrix& rho0) {
  const qlin::HermitianEigen eig = qlin::hermitian_eig(ComplexMatrix::from(rho0.op()), 1e-12);
  std::vector<std::pair<double, std::array<cplx, 2>>> out;
  for (std::size_t j = 0; j < 2; ++j) {
    if (eig.values[j] <= 0.0) continue;
    out.push_back({eig.values[j], {eig.vectors(0, j), eig.vectors(1, j)}});
  }
  return out;
}

inline Record record_from_bits(std::size_t bits, std::size_t l) {
  Record r(l);
  for (std::size_t i = 0; i < l; ++i) r[i] = static_cast<std::uint8_t>((bits >> (l - 1 - i)) & 1U);
  return r;
}

}  // namespace detail

// Full Hilbert-space oracle. Returns one RecordTable per record length l = 1..k.
//
// The joint vector lives on atom (x) slices 1..k with the atom as the most significant bit.
// Slices are expressed in the detection basis from the start, so projecting slices 1..l
// onto a record reduces to selecting amplitudes; the step unitaries are conjugated
// accordingly. For controlled plants the l-th step applies M_l(u(prefix)) on each
// record-prefix subspace of slices 1..l-1, which is the controlled unitary itself.
inline std::vector<RecordTable> full_space_oracle_history(const Plant& plant, const RecordStrategy& strategy,
                                                          std::size_t k, Detection d, const DensityMatrix& rho0) {
  if (k == 0 || k > kMaxFullSpaceSteps) {
    throw DimensionError("full_space_oracle: k must lie in 1.." + std::to_string(kMaxFullSpaceSteps));
  }
  if (k > plant.grid().k()) throw DomainError("full_space_oracle: k exceeds the horizon");
  const std::size_t n = k + 1;
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t atom_bit = std::size_t{1} << k;
  const DetectionBasis basis = detection_basis(d, plant.grid().lambda());

  // B[o][s] = conj(e_o[s]) maps slice coordinates to detection coordinates.
  ComplexMatrix b(2, 2);
  for (std::size_t o = 0; o < 2; ++o)
    for (std::size_t s = 0; s < 2; ++s) b(o, s) = std::conj(basis.vectors[o][s]);
  const ComplexMatrix frame = qlin::kron(ComplexMatrix::identity(2), b);
  const std::array<cplx, 2> vacuum{b(0, 1), b(1, 1)};

  std::map<double, ComplexMatrix> step_cache;
  auto step_matrix = [&](double u) -> const ComplexMatrix& {
    const double key = plant.is_controlled() ? u : 0.0;
    auto it = step_cache.find(key);
    if (it == step_cache.end()) it = step_cache.emplace(key, frame * plant.unitary(key) * frame.adjoint()).first;
    return it->second;
  };

  const auto mixture = detail::eigen_mixture(rho0);
  std::vector<std::vector<cplx>> psi;
  for (const auto& [w, v] : mixture) {
    std::vector<cplx> amp(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      cplx a = v[(idx & atom_bit) ? 1 : 0];
      for (std::size_t i = 1; i <= k; ++i) a *= vacuum[(idx >> (k - i)) & 1U];
      amp[idx] = a;
    }
    psi.push_back(std::move(amp));
  }

  std::vector<RecordTable> history;
  for (std::size_t l = 1; l <= k; ++l) {
    const std::size_t slice_bit = std::size_t{1} << (k - l);
    const std::size_t prefix_count = std::size_t{1} << (l - 1);
    const std::size_t rest_count = std::size_t{1} << (k - l);
    for (std::size_t pre = 0; pre < prefix_count; ++pre) {
      const Record prefix = detail::record_from_bits(pre, l - 1);
      const ComplexMatrix& m = step_matrix(detail::control_for(strategy, prefix));
      const std::size_t base = pre << (k - l + 1);
      for (std::size_t rest = 0; rest < rest_count; ++rest) {
        const std::size_t i0 = base | rest;
        const std::array<std::size_t, 4> idx{i0, i0 | slice_bit, i0 | atom_bit, i0 | atom_bit | slice_bit};
        for (auto& amp : psi) {
          std::array<cplx, 4> in{amp[idx[0]], amp[idx[1]], amp[idx[2]], amp[idx[3]]};
          for (std::size_t r = 0; r < 4; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < 4; ++c) acc += m(r, c) * in[c];
            amp[idx[r]] = acc;
          }
        }
      }
    }

    RecordTable table{l, d, {}};
    const std::size_t tail = std::size_t{1} << (k - l);
    for (std::size_t rec = 0; rec < (std::size_t{1} << l); ++rec) {
      AtomOperator varrho;
      for (std::size_t j = 0; j < mixture.size(); ++j) {
        const double w = mixture[j].first;
        for (std::size_t t = 0; t < tail; ++t) {
          const std::size_t i0 = (rec << (k - l)) | t;
          const cplx a0 = psi[j][i0];
          const cplx a1 = psi[j][i0 | atom_bit];
          varrho(0, 0) += w * a0 * std::conj(a0);
          varrho(0, 1) += w * a0 * std::conj(a1);
          varrho(1, 0) += w * a1 * std::conj(a0);
          varrho(1, 1) += w * a1 * std::conj(a1);
        }
      }
      const double p = varrho.trace().real();
      table.entries.push_back({detail::record_from_bits(rec, l), p, detail::conditional(varrho, p)});
    }
    history.push_back(std::move(table));
  }
  return history;
}

inline RecordTable full_space_oracle(const Plant& plant, const RecordStrategy& strategy, std::size_t k, Detection d,
                                     const DensityMatrix& rho0) {
  return std::move(full_space_oracle_history(plant, strategy, k, d, rho0).back());
}

// Max |commutator| entry over [dY(l), dY(j)] for all l, j and [dY(l), j_i(X)] for l <= i,
// built from explicit full-space operators of an uncontrolled plant.
inline double nondemolition_check(const Plant& plant, std::size_t k, Detection d,
                                  const std::vector<AtomOperator>& observables) {
  if (k == 0 || k > 6) throw DimensionError("nondemolition_check: k must lie in 1..6");
  const std::size_t n = k + 1;
  const std::size_t dim = std::size_t{1} << n;
  const ComplexMatrix m = plant.unitary(0.0);
  const AtomOperator dz = d == Detection::homodyne
                              ? (qlin::pauli::sigma_plus() + qlin::pauli::sigma_minus()) * plant.grid().lambda()
                              : qlin::pauli::excited_projector();

  std::vector<ComplexMatrix> u_l;  // U(l) = M_l ... M_1
  ComplexMatrix u = ComplexMatrix::identity(dim);
  for (std::size_t l = 1; l <= k; ++l) {
    u = qlin::embed_atom_slice(m, l, k) * u;
    u_l.push_back(u);
  }
  std::vector<ComplexMatrix> dy;
  for (std::size_t l = 1; l <= k; ++l) {
    const ComplexMatrix z = qlin::embed_site(dz, l, n);
    dy.push_back(u_l[l - 1].adjoint() * z * u_l[l - 1]);
  }
  double worst = 0.0;
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t j = l + 1; j < k; ++j) worst = std::max(worst, qlin::commutator(dy[l], dy[j]).max_abs());
  for (const AtomOperator& x : observables) {
    const ComplexMatrix xa = qlin::embed_site(x, 0, n);
    for (std::size_t i = 0; i < k; ++i) {
      const ComplexMatrix ji = u_l[i].adjoint() * xa * u_l[i];
      for (std::size_t l = 0; l <= i; ++l) worst = std::max(worst, qlin::commutator(dy[l], ji).max_abs());
    }
  }
  return worst;
}

}  // namespace qbinom::qoracle
