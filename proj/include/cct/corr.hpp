// Copyright 2026 The cct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCT_CORR_HPP_
#define CCT_CORR_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cct/errors.hpp"
#include "cct/sampling.hpp"

namespace cct {

// Dense correlation matrix: symmetric, unit diagonal.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
      throw config_error("correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      if (std::fabs(m_(i, i) - 1.0) > 1e-12) {
        throw data_error("correlation matrix diagonal must be 1");
      }
      for (Eigen::Index j = 0; j < i; ++j) {
        if (std::fabs(m_(i, j) - m_(j, i)) > 1e-12) {
          throw data_error("correlation matrix must be symmetric");
        }
      }
    }
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& entries() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// Model 1: sigma_ij = rho^|i-j|.
inline CorrelationMatrix ar1_correlation(int d, double rho) {
  if (d < 1) throw config_error("ar1_correlation: d must be positive");
  if (!(std::fabs(rho) < 1.0)) {
    throw domain_error("ar1_correlation: |rho| must be below 1");
  }
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      m(i, j) = std::pow(rho, std::abs(i - j));
    }
    m(i, i) = 1.0;
  }
  return CorrelationMatrix(std::move(m));
}

// Model 2: unit diagonal, sigma_ij = 1/(0.7 + |i-j|^rho) off the diagonal.
inline CorrelationMatrix polydecay_correlation(int d, double rho) {
  if (d < 1) throw config_error("polydecay_correlation: d must be positive");
  if (!(rho > 0.0)) {
    throw domain_error("polydecay_correlation: rho must be positive");
  }
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      double v = 1.0 / (0.7 + std::pow(static_cast<double>(i - j), rho));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return CorrelationMatrix(std::move(m));
}

// Model 3: Sigma = D * (A^T A) * D with A of shape (d/5) x d, a_ij =
// rho^|i-j|, and D the diagonal that restores unit variances. Rank is at
// most d/5. Zero diagonal entries of A^T A (which arise at rho = 0) make
// the normalization undefined and raise an error.
inline CorrelationMatrix singular_correlation(int d, double rho) {
  if (d < 5 || d % 5 != 0) {
    throw config_error("singular_correlation: d must be a positive multiple of 5");
  }
  if (!(std::fabs(rho) < 1.0)) {
    throw domain_error("singular_correlation: |rho| must be below 1");
  }
  int m_rows = d / 5;
  Eigen::MatrixXd a(m_rows, d);
  for (int i = 0; i < m_rows; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = std::pow(rho, std::abs(i - j));
    }
    a(i, i) = 1.0;
  }
  Eigen::MatrixXd g = a.transpose() * a;
  Eigen::VectorXd scale(d);
  for (int j = 0; j < d; ++j) {
    if (g(j, j) <= 0.0) {
      throw data_error(
          "singular_correlation: degenerate column (zero variance); "
          "rho = 0 is not admissible");
    }
    scale(j) = 1.0 / std::sqrt(g(j, j));
  }
  Eigen::MatrixXd s = scale.asDiagonal() * g * scale.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  for (int j = 0; j < d; ++j) s(j, j) = 1.0;
  return CorrelationMatrix(std::move(s));
}

// Exchangeable: all off-diagonal entries equal to rho.
inline CorrelationMatrix exchangeable_correlation(int d, double rho) {
  if (d < 1) throw config_error("exchangeable_correlation: d must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw domain_error("exchangeable_correlation: rho must lie in [0,1)");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d, d, rho);
  m.diagonal().setOnes();
  return CorrelationMatrix(std::move(m));
}

// AR(1) truncated to |i-j| <= d0. If the truncation breaks positive
// semidefiniteness the matrix is projected back: negative eigenvalues are
// clipped at zero and the diagonal renormalized to 1.
inline CorrelationMatrix banded_from_ar1(int d, double rho, int d0) {
  if (d < 1) throw config_error("banded_from_ar1: d must be positive");
  if (d0 < 1) throw config_error("banded_from_ar1: bandwidth must be positive");
  if (!(std::fabs(rho) < 1.0)) {
    throw domain_error("banded_from_ar1: |rho| must be below 1");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = 1.0;
    for (int j = std::max(0, i - d0); j < i; ++j) {
      double v = std::pow(rho, i - j);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues()(0) >= -1e-10) return CorrelationMatrix(std::move(m));
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd b =
      es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  Eigen::VectorXd scale(d);
  for (int i = 0; i < d; ++i) {
    if (b(i, i) <= 0.0) {
      throw data_error("banded_from_ar1: PSD repair produced a zero variance");
    }
    scale(i) = 1.0 / std::sqrt(b(i, i));
  }
  Eigen::MatrixXd s = scale.asDiagonal() * b * scale.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  for (int i = 0; i < d; ++i) s(i, i) = 1.0;
  return CorrelationMatrix(std::move(s));
}

// Factor L with L L^T = Sigma, plus the structure needed to apply it fast.
struct SamplerFactor {
  int dim = 0;
  int rank = 0;
  int bandwidth = 0;        // max |i-j| with L(i,j) != 0 when triangular
  bool lower_triangular = false;
  Eigen::MatrixXd L;        // dim x rank

  // out = L * z where z has `rank` entries. Triangular factors of banded
  // matrices keep their band, so the loop is O(dim * bandwidth) for them.
  void apply(const double* z, double* out) const {
    if (lower_triangular) {
      for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        int j0 = std::max(0, i - bandwidth);
        for (int j = j0; j <= i; ++j) acc += L(i, j) * z[j];
        out[i] = acc;
      }
      return;
    }
    for (int i = 0; i < dim; ++i) out[i] = 0.0;
    for (int k = 0; k < rank; ++k) {
      double zk = z[k];
      const double* col = L.col(k).data();
      for (int i = 0; i < dim; ++i) out[i] += col[i] * zk;
    }
  }
};

// Cholesky factorization with a symmetric-eigendecomposition fallback for
// rank-deficient matrices (negative eigenvalues below -1e-6 are rejected,
// smaller ones clipped to zero).
inline SamplerFactor factorize(const CorrelationMatrix& sigma) {
  const Eigen::MatrixXd& m = sigma.entries();
  int d = sigma.dim();
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    SamplerFactor f;
    f.dim = d;
    f.rank = d;
    f.lower_triangular = true;
    f.L = llt.matrixL();
    int bw = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < i; ++j) {
        if (f.L(i, j) != 0.0) bw = std::max(bw, i - j);
      }
    }
    f.bandwidth = bw;
    return f;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    throw data_error("factorize: eigendecomposition failed");
  }
  double lam_max = std::max(es.eigenvalues()(d - 1), 0.0);
  if (es.eigenvalues()(0) < -1e-6) {
    throw data_error("factorize: matrix is not positive semidefinite");
  }
  double tol = static_cast<double>(d) * 2.220446049250313e-16 * lam_max;
  int rank = 0;
  for (int i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) > tol) ++rank;
  }
  if (rank == 0) throw data_error("factorize: matrix has rank zero");
  SamplerFactor f;
  f.dim = d;
  f.rank = rank;
  f.bandwidth = d - 1;
  f.L.resize(d, rank);
  for (int k = 0; k < rank; ++k) {
    // Eigenvalues ascend; take the top `rank` columns in descending order.
    int src = d - 1 - k;
    f.L.col(k) = es.eigenvectors().col(src) * std::sqrt(es.eigenvalues()(src));
  }
  return f;
}

// X = mu + L z with z i.i.d. standard normal from the stream.
inline void sample_mvn(const SamplerFactor& f, const double* mu,
                       Sampler* sampler, std::vector<double>* z_scratch,
                       double* out) {
  z_scratch->resize(f.rank);
  for (int i = 0; i < f.rank; ++i) (*z_scratch)[i] = sampler->normal();
  f.apply(z_scratch->data(), out);
  if (mu != nullptr) {
    for (int i = 0; i < f.dim; ++i) out[i] += mu[i];
  }
}

inline std::vector<double> sample_mvn(const SamplerFactor& f,
                                      const std::vector<double>& mu,
                                      const RngStream& stream) {
  if (!mu.empty() && static_cast<int>(mu.size()) != f.dim) {
    throw config_error("sample_mvn: mean length does not match dimension");
  }
  Sampler sampler(stream);
  std::vector<double> z, out(f.dim);
  sample_mvn(f, mu.empty() ? nullptr : mu.data(), &sampler, &z, out.data());
  return out;
}

// X = (L z) / sqrt(w / nu), w chi-square with nu degrees of freedom drawn
// from the same stream after z.
inline void sample_mvt(const SamplerFactor& f, double nu, Sampler* sampler,
                       std::vector<double>* z_scratch, double* out) {
  z_scratch->resize(f.rank);
  for (int i = 0; i < f.rank; ++i) (*z_scratch)[i] = sampler->normal();
  f.apply(z_scratch->data(), out);
  double denom = std::sqrt(sampler->chi_square(nu) / nu);
  for (int i = 0; i < f.dim; ++i) out[i] /= denom;
}

inline std::vector<double> sample_mvt(const SamplerFactor& f, int nu,
                                      const RngStream& stream) {
  if (nu < 1) throw config_error("sample_mvt: nu must be at least 1");
  Sampler sampler(stream);
  std::vector<double> z, out(f.dim);
  sample_mvt(f, static_cast<double>(nu), &sampler, &z, out.data());
  return out;
}

// Writes the dense matrix as plain CSV (shortest round-trip decimals).
inline void save_correlation(const std::string& path,
                             const CorrelationMatrix& sigma) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open for writing: " + path);
  const Eigen::MatrixXd& m = sigma.entries();
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw config_error("write failed: " + path);
}

// Reads a dense CSV matrix and validates correlation-matrix invariants
// (symmetry and unit diagonal within 1e-8, smallest eigenvalue >= -1e-6).
// Entries are symmetrized and the diagonal snapped to 1 on success.
inline CorrelationMatrix load_correlation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        throw data_error("matrix parse error at row " +
                         std::to_string(rows.size() + 1));
      }
      row.push_back(v);
      p = next;
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p < end) {
        if (*p != ',') {
          throw data_error("matrix parse error at row " +
                           std::to_string(rows.size() + 1));
        }
        ++p;
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw data_error("matrix file is empty: " + path);
  std::size_t d = rows.size();
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) {
      throw data_error("matrix row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(rows[i][j])) {
        throw data_error("matrix entries must be finite");
      }
      m(i, j) = rows[i][j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (std::fabs(m(i, i) - 1.0) > 1e-8) {
      throw data_error("invariant violated: diagonal entries must equal 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > 1e-8) {
        throw data_error("invariant violated: matrix must be symmetric");
      }
      if (std::fabs(m(i, j)) > 1.0 + 1e-8) {
        throw data_error("invariant violated: correlations must lie in [-1,1]");
      }
    }
  }
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  for (std::size_t i = 0; i < d; ++i) sym(i, i) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.eigenvalues()(0) < -1e-6) {
    throw data_error("invariant violated: matrix is not positive semidefinite");
  }
  return CorrelationMatrix(std::move(sym));
}

}  // namespace cct

#endif  // CCT_CORR_HPP_
