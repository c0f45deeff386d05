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

#pragma once

#include <cstdint>
#include <vector>

#include "fwadv/tensor.hpp"

namespace fwadv {

struct PowerIterationOptions {
  double tol = 1e-7;
  int max_iters = 500;
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
};

/// Leading singular value with unit left/right vectors.
struct SingularTriple {
  double sigma = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  bool converged = false;
  int iterations = 0;
};

/// Top singular pair by power iteration on v <- normalize(M^T (M v)).
///
/// Stops once two successive right vectors differ by at most `tol` in the
/// Euclidean norm, or after `max_iters` products, in which case the best
/// estimate is returned with `converged == false`. A zero matrix yields
/// sigma = 0 with u = e1, v = e1. If the start vector is orthogonal to the
/// row space the run restarts once from a second seed.
SingularTriple top_singular_pair(const Matrix& m, const PowerIterationOptions& options = {});

struct SvdResult {
  Matrix u;               ///< rows x k, orthonormal columns
  std::vector<double> s;  ///< k = min(rows, cols), descending
  Matrix v;               ///< cols x k, orthonormal columns
};

/// Largest dimension accepted by full_svd_small.
inline constexpr std::size_t kFullSvdMaxDim = 64;

/// Thin SVD by one-sided Jacobi rotations. Intended as a reference for small
/// matrices; refuses anything larger than kFullSvdMaxDim in either dimension.
SvdResult full_svd_small(const Matrix& m);

/// Singular values (descending) by one-sided Jacobi, without a size limit.
std::vector<double> singular_values(const Matrix& m);

/// Sum of singular values.
double nuclear_norm(const Matrix& m);

/// Sum over channels of the per-channel nuclear norm.
double tensor_nuclear_norm(const ImageTensor& x);

struct VectorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

VectorNorms vector_norms(const ImageTensor& x);

/// Flattened inner product; throws ValidationError on a shape mismatch.
double inner_product(const ImageTensor& a, const ImageTensor& b);

}  // namespace fwadv
