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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fwadv {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Takes ownership of row-major data; throws ValidationError on a length mismatch.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  double frobenius_norm() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// Outer product a * b^T.
Matrix outer(std::span<const double> a, std::span<const double> b);

/// (channels, height, width) extents of an image or perturbation.
struct Shape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return channels * height * width; }
  std::string str() const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Channel-major image or perturbation tensor. Valid images live in [0,1];
/// perturbations may be negative.
class ImageTensor {
 public:
  ImageTensor() = default;
  explicit ImageTensor(Shape shape, double fill = 0.0)
      : shape_(shape), data_(shape.size(), fill) {}
  ImageTensor(Shape shape, std::vector<double> data);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t channels() const noexcept { return shape_.channels; }
  std::size_t height() const noexcept { return shape_.height; }
  std::size_t width() const noexcept { return shape_.width; }
  std::size_t size() const noexcept { return data_.size(); }

  double& at(std::size_t c, std::size_t r, std::size_t k) {
    return data_[(c * shape_.height + r) * shape_.width + k];
  }
  double at(std::size_t c, std::size_t r, std::size_t k) const {
    return data_[(c * shape_.height + r) * shape_.width + k];
  }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::vector<double>& storage() noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  /// Copies channel c out as a height x width matrix.
  Matrix channel(std::size_t c) const;
  void set_channel(std::size_t c, const Matrix& m);

  /// Copies the rectangle [r0,r1) x [k0,k1) of channel c.
  Matrix block(std::size_t c, std::size_t r0, std::size_t r1, std::size_t k0,
               std::size_t k1) const;
  void set_block(std::size_t c, std::size_t r0, std::size_t k0, const Matrix& m);

  bool all_finite() const;
  bool in_unit_box() const;

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

ImageTensor operator+(const ImageTensor& a, const ImageTensor& b);
ImageTensor operator-(const ImageTensor& a, const ImageTensor& b);
ImageTensor operator*(double s, const ImageTensor& a);

/// Componentwise clamp into [0,1].
ImageTensor clamp_unit(const ImageTensor& x);

}  // namespace fwadv
