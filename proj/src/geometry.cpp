#include "qmlab/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "qmlab/errors.hpp"

namespace qmlab {

void RigidMotion::validate(int n) const {
  std::size_t nn = static_cast<std::size_t>(n);
  if (!translation.empty() && translation.size() != nn) {
    throw DomainError("RigidMotion: translation has wrong dimension");
  }
  if (rotation.empty()) return;
  if (rotation.size() != nn * nn) {
    throw DomainError("RigidMotion: rotation must be " + std::to_string(n) + "x" +
                      std::to_string(n));
  }
  for (std::size_t i = 0; i < nn; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      double dot = 0.0;
      for (std::size_t m = 0; m < nn; ++m) dot += rotation[m * nn + i] * rotation[m * nn + j];
      double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - expected) > 1e-12) {
        throw DomainError("RigidMotion: rotation is not orthogonal (R^T R != I)");
      }
    }
  }
}

Vec RigidMotion::rotate(const Vec& x) const {
  if (rotation.empty()) return x;
  std::size_t n = x.size();
  Vec y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += rotation[i * n + j] * x[j];
    y[i] = acc;
  }
  return y;
}

Vec RigidMotion::apply(const Vec& x) const {
  Vec y = rotate(x);
  if (!translation.empty()) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation[i];
  }
  return y;
}

Vec RigidMotion::apply_inverse(const Vec& y) const {
  std::size_t n = y.size();
  Vec shifted = y;
  if (!translation.empty()) {
    for (std::size_t i = 0; i < n; ++i) shifted[i] -= translation[i];
  }
  if (rotation.empty()) return shifted;
  Vec x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += rotation[j * n + i] * shifted[j];
    x[i] = acc;
  }
  return x;
}

std::vector<double> frame_with_first_axis(const Vec& axis) {
  std::size_t n = axis.size();
  double norm = 0.0;
  for (double v : axis) norm += v * v;
  if (std::abs(norm - 1.0) > 1e-12) {
    throw DomainError("frame_with_first_axis: axis must be a unit vector");
  }
  // Gram-Schmidt against the standard basis, skipping the coordinate most
  // parallel to the axis; deterministic for a given axis.
  std::vector<Vec> cols;
  cols.push_back(axis);
  std::size_t skip = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(axis[i]) > std::abs(axis[skip])) skip = i;
  }
  for (std::size_t e = 0; e < n && cols.size() < n; ++e) {
    if (e == skip) continue;
    Vec v(n, 0.0);
    v[e] = 1.0;
    for (const Vec& c : cols) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += c[i] * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * c[i];
    }
    double len = 0.0;
    for (double w : v) len += w * w;
    len = std::sqrt(len);
    if (len < 1e-8) continue;
    for (double& w : v) w /= len;
    cols.push_back(v);
  }
  if (cols.size() != n) {
    throw DomainError("frame_with_first_axis: failed to complete the basis");
  }
  std::vector<double> m(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) m[i * n + j] = cols[j][i];
  }
  return m;
}

}  // namespace qmlab
