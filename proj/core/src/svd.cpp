// Copyright 2026 The fwadv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// One-sided (Hestenes) Jacobi SVD for small dense matrices.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fwadv/error.hpp"
#include "fwadv/linalg.hpp"

namespace fwadv {
namespace {

constexpr int kMaxSweeps = 80;
constexpr double kRotationEps = 1e-15;

// Column-major working copy: col[j] holds column j of a tall matrix.
using Columns = std::vector<std::vector<double>>;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void rotate(std::vector<double>& a, std::vector<double>& b, double c, double s) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    const double bi = b[i];
    a[i] = c * ai - s * bi;
    b[i] = s * ai + c * bi;
  }
}

struct JacobiOutput {
  Columns a;  // rows x n, orthogonal columns on exit
  Columns v;  // n x n rotation accumulator (empty when not requested)
};

// Orthogonalizes the columns of a tall (rows >= cols) matrix.
JacobiOutput orthogonalize(const Matrix& tall, bool want_v) {
  const std::size_t m = tall.rows();
  const std::size_t n = tall.cols();
  JacobiOutput out;
  out.a.assign(n, std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out.a[c][r] = tall(r, c);
  if (want_v) {
    out.v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) out.v[i][i] = 1.0;
  }

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = dot(out.a[i], out.a[i]);
        const double beta = dot(out.a[j], out.a[j]);
        const double gamma = dot(out.a[i], out.a[j]);
        if (gamma == 0.0 || std::abs(gamma) <= kRotationEps * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(out.a[i], out.a[j], c, s);
        if (want_v) rotate(out.v[i], out.v[j], c, s);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  return out;
}

// Extends `cols` (orthonormal, some possibly flagged missing) to a full
// orthonormal set by Gram-Schmidt against the standard basis.
void complete_basis(Columns& cols, const std::vector<bool>& present) {
  const std::size_t dim = cols.empty() ? 0 : cols[0].size();
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (present[j]) continue;
    while (next_basis < dim) {
      std::vector<double> cand(dim, 0.0);
      cand[next_basis++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
          if (k == j || (!present[k] && k > j)) continue;
          const double p = dot(cand, cols[k]);
          for (std::size_t i = 0; i < dim; ++i) cand[i] -= p * cols[k][i];
        }
      }
      const double nrm = std::sqrt(dot(cand, cand));
      if (nrm > 1e-6) {
        for (double& x : cand) x /= nrm;
        cols[j] = std::move(cand);
        break;
      }
    }
  }
}

SvdResult jacobi_svd(const Matrix& m, bool want_vectors) {
  const bool transposed = m.rows() < m.cols();
  const Matrix tall = transposed ? m.transpose() : m;
  const std::size_t rows = tall.rows();
  const std::size_t k = tall.cols();

  JacobiOutput jac = orthogonalize(tall, want_vectors);

  std::vector<double> sv(k);
  for (std::size_t j = 0; j < k; ++j) sv[j] = std::sqrt(dot(jac.a[j], jac.a[j]));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

  SvdResult out;
  out.s.resize(k);
  for (std::size_t j = 0; j < k; ++j) out.s[j] = sv[order[j]];
  if (!want_vectors) return out;

  const double smax = k > 0 ? out.s[0] : 0.0;
  Columns left(k, std::vector<double>(rows, 0.0));
  Columns right(k);
  std::vector<bool> present(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    right[j] = jac.v[src];
    if (out.s[j] > 0.0 && out.s[j] > smax * 1e-12) {
      for (std::size_t i = 0; i < rows; ++i) left[j][i] = jac.a[src][i] / out.s[j];
      present[j] = true;
    }
  }
  complete_basis(left, present);

  // tall = L diag(s) R^T; undo the transpose by swapping the factors.
  const Columns& ucols = transposed ? right : left;
  const Columns& vcols = transposed ? left : right;
  out.u = Matrix(m.rows(), k);
  out.v = Matrix(m.cols(), k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) out.u(i, j) = ucols[j][i];
    for (std::size_t i = 0; i < m.cols(); ++i) out.v(i, j) = vcols[j][i];
  }
  return out;
}

}  // namespace

SvdResult full_svd_small(const Matrix& m) {
  if (m.rows() > kFullSvdMaxDim || m.cols() > kFullSvdMaxDim)
    throw ValidationError("full_svd_small refuses " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " (limit " +
                          std::to_string(kFullSvdMaxDim) + ")");
  return jacobi_svd(m, true);
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  return jacobi_svd(m, false).s;
}

}  // namespace fwadv
