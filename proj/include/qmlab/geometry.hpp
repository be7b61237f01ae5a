#pragma once

#include <vector>

namespace qmlab {

using Vec = std::vector<double>;

// Rigid motion x -> R x + t.  Empty rotation/translation mean identity/zero,
// so a default-constructed motion is the identity in any dimension.
struct RigidMotion {
  std::vector<double> rotation;  // row-major n x n; empty = identity
  Vec translation;               // empty = zero

  bool is_identity() const { return rotation.empty() && translation.empty(); }
  // Throws DomainError unless rotation is n x n with R^T R = I to 1e-12 and
  // translation has length n (when present).
  void validate(int n) const;
  Vec apply(const Vec& x) const;
  Vec apply_inverse(const Vec& y) const;  // R^T (y - t)
  Vec rotate(const Vec& x) const;         // R x
};

// Axis-aligned box, lo[i] <= hi[i].
struct Box {
  Vec lo;
  Vec hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

// A box expressed in a moved frame: ambient points are frame.apply(u) for
// u in box.
struct OrientedBox {
  Box box;
  RigidMotion frame;
};

// Row-major orthogonal matrix with first column `axis` (|axis| = 1); the
// remaining columns complete an orthonormal basis deterministically.
std::vector<double> frame_with_first_axis(const Vec& axis);

}  // namespace qmlab
