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

#include "fwadv/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "fwadv/error.hpp"
#include "fwadv/random.hpp"
#include "fwadv/tensor.hpp"

namespace fwadv {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ValidationError("matrix data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ValidationError("ragged matrix rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matrix product dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

namespace {

void require_same(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("matrix shape mismatch");
}

void require_same(const Shape& a, const Shape& b) {
  if (a != b) throw ValidationError("tensor shape mismatch: " + a.str() + " vs " + b.str());
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same(a, b);
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same(a, b);
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (double& x : out.data()) x *= s;
  return out;
}

Matrix outer(std::span<const double> a, std::span<const double> b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

std::string Shape::str() const {
  return "(" + std::to_string(channels) + "," + std::to_string(height) + "," +
         std::to_string(width) + ")";
}

ImageTensor::ImageTensor(Shape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size())
    throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                          " does not match shape " + shape_.str());
}

Matrix ImageTensor::channel(std::size_t c) const {
  return block(c, 0, shape_.height, 0, shape_.width);
}

void ImageTensor::set_channel(std::size_t c, const Matrix& m) {
  if (m.rows() != shape_.height || m.cols() != shape_.width)
    throw ValidationError("channel matrix does not match tensor shape");
  set_block(c, 0, 0, m);
}

Matrix ImageTensor::block(std::size_t c, std::size_t r0, std::size_t r1, std::size_t k0,
                          std::size_t k1) const {
  if (c >= shape_.channels || r0 > r1 || r1 > shape_.height || k0 > k1 || k1 > shape_.width)
    throw ValidationError("block out of range for tensor " + shape_.str());
  Matrix m(r1 - r0, k1 - k0);
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t k = k0; k < k1; ++k) m(r - r0, k - k0) = at(c, r, k);
  return m;
}

void ImageTensor::set_block(std::size_t c, std::size_t r0, std::size_t k0, const Matrix& m) {
  if (c >= shape_.channels || r0 + m.rows() > shape_.height || k0 + m.cols() > shape_.width)
    throw ValidationError("block out of range for tensor " + shape_.str());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = 0; k < m.cols(); ++k) at(c, r0 + r, k0 + k) = m(r, k);
}

bool ImageTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

bool ImageTensor::in_unit_box() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

ImageTensor operator+(const ImageTensor& a, const ImageTensor& b) {
  require_same(a.shape(), b.shape());
  ImageTensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

ImageTensor operator-(const ImageTensor& a, const ImageTensor& b) {
  require_same(a.shape(), b.shape());
  ImageTensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

ImageTensor operator*(double s, const ImageTensor& a) {
  ImageTensor out = a;
  for (double& x : out.data()) x *= s;
  return out;
}

ImageTensor clamp_unit(const ImageTensor& x) {
  ImageTensor out = x;
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Spectral primitives

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void mat_vec(const Matrix& m, std::span<const double> v, std::span<double> out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.data().data() + r * m.cols();
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += row[c] * v[c];
    out[r] = s;
  }
}

void mat_t_vec(const Matrix& m, std::span<const double> w, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.data().data() + r * m.cols();
    const double wr = w[r];
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += row[c] * wr;
  }
}

std::vector<double> unit_vector(std::size_t n) {
  std::vector<double> e(n, 0.0);
  if (n > 0) e[0] = 1.0;
  return e;
}

}  // namespace

SingularTriple top_singular_pair(const Matrix& m, const PowerIterationOptions& options) {
  if (!(options.tol > 0.0)) throw ValidationError("power iteration tol must be positive");
  if (options.max_iters < 1) throw ValidationError("power iteration max_iters must be >= 1");
  for (double x : m.data())
    if (!std::isfinite(x)) throw ValidationError("power iteration input has non-finite entries");

  SingularTriple out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0 || m.frobenius_norm() == 0.0) {
    out.u = unit_vector(rows);
    out.v = unit_vector(cols);
    out.converged = true;
    return out;
  }

  std::vector<double> v(cols), w(rows), z(cols);
  int restarts_left = 1;
  std::uint64_t seed = options.seed;

  auto seed_start = [&](std::uint64_t s) {
    Rng rng(s);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    const double n = norm2(v);
    for (double& x : v) x /= n;
  };
  seed_start(seed);

  int it = 0;
  while (it < options.max_iters) {
    ++it;
    mat_vec(m, v, w);
    mat_t_vec(m, w, z);
    const double nz = norm2(z);
    if (nz == 0.0) {
      // Start vector lies in the null space of M.
      if (restarts_left-- > 0) {
        seed = derive_seed(seed, 1);
        seed_start(seed);
        continue;
      }
      break;
    }
    double diff2 = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double next = z[c] / nz;
      diff2 += (next - v[c]) * (next - v[c]);
      v[c] = next;
    }
    if (std::sqrt(diff2) <= options.tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = it;

  mat_vec(m, v, w);
  out.sigma = norm2(w);
  if (out.sigma > 0.0) {
    for (double& x : w) x /= out.sigma;
    out.u = std::move(w);
  } else {
    out.u = unit_vector(rows);
  }
  out.v = std::move(v);
  return out;
}

double nuclear_norm(const Matrix& m) {
  double s = 0.0;
  for (double x : singular_values(m)) s += x;
  return s;
}

double tensor_nuclear_norm(const ImageTensor& x) {
  double s = 0.0;
  for (std::size_t c = 0; c < x.channels(); ++c) s += nuclear_norm(x.channel(c));
  return s;
}

VectorNorms vector_norms(const ImageTensor& x) {
  VectorNorms n;
  double sq = 0.0;
  for (double v : x.data()) {
    const double a = std::abs(v);
    n.l1 += a;
    sq += v * v;
    n.linf = std::max(n.linf, a);
  }
  n.l2 = std::sqrt(sq);
  return n;
}

double inner_product(const ImageTensor& a, const ImageTensor& b) {
  require_same(a.shape(), b.shape());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace fwadv
