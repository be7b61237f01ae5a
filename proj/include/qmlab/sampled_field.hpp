#pragma once

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmlab/flat_quasimode.hpp"
#include "qmlab/geometry.hpp"

namespace qmlab {

// Version tag stamped into every file this toolkit writes.
inline constexpr const char* kFormatVersion = "1.0";

// Rectangular lattice: point j = origin + j .* step, j_i in [0, count_i),
// stored row-major (last axis fastest).
struct GridSpec {
  Vec origin;
  Vec step;
  std::vector<int> count;

  int dim() const { return static_cast<int>(count.size()); }
  std::size_t total() const;
  Vec point(std::size_t flat_index) const;
};

// A field sampled on a grid, together with everything needed to regenerate
// it: the cap and the rigid motion the samples were taken under.
struct SampledField {
  SpectralCap cap;
  RigidMotion motion;
  GridSpec grid;
  std::vector<std::complex<double>> values;

  // Grid consistency plus the resolution rule: every step <= h/4 (the field
  // oscillates at wavelength ~h, so 4 samples per half-period minimum).
  void validate() const;
};

SampledField sample_field(const SpectralCap& cap, const GridSpec& grid,
                          const RigidMotion* motion = nullptr, const EvalOptions& options = {});

nlohmann::json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json motion_to_json(const RigidMotion& motion);
RigidMotion motion_from_json(const nlohmann::json& j);

// One-line JSON header {format_version, n, h, alpha, epsilon_cap, omega0,
// motion, grid}, merged with `extra`, then newline, then the samples as
// little-endian float64 (re, im) pairs in row-major grid order.
void write_field_binary(const std::string& path, const SampledField& field,
                        const nlohmann::json& extra = nlohmann::json::object());

// Same header with the samples inline as a flat [re, im, re, im, ...] array;
// for small grids and debugging.
void write_field_json(const std::string& path, const SampledField& field,
                      const nlohmann::json& extra = nlohmann::json::object());

// Reads either format (sniffs the header's "storage" key).  If header_out is
// non-null it receives the full parsed header object.
SampledField read_field(const std::string& path, nlohmann::json* header_out = nullptr);

}  // namespace qmlab
