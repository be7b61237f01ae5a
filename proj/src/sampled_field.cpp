#include "qmlab/sampled_field.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "qmlab/errors.hpp"

namespace qmlab {
namespace {

using nlohmann::json;

std::uint64_t to_little_endian_bits(double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
    bits = r;
  }
  return bits;
}

double from_little_endian_bits(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((bits >> (8 * i)) & 0xffu);
    bits = r;
  }
  return std::bit_cast<double>(bits);
}

json header_json(const SampledField& field, const json& extra, const char* storage) {
  json h;
  h["format_version"] = kFormatVersion;
  h["storage"] = storage;
  h["n"] = field.cap.n;
  h["h"] = field.cap.h;
  h["alpha"] = field.cap.alpha;
  h["epsilon_cap"] = field.cap.epsilon_cap;
  h["omega0"] = field.cap.direction();
  h["motion"] = motion_to_json(field.motion);
  h["grid"] = grid_to_json(field.grid);
  for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
  return h;
}

SampledField field_from_header(const json& h) {
  SampledField f;
  f.cap.n = h.at("n").get<int>();
  f.cap.h = h.at("h").get<double>();
  f.cap.alpha = h.at("alpha").get<double>();
  f.cap.epsilon_cap = h.at("epsilon_cap").get<double>();
  f.cap.omega0 = h.at("omega0").get<Vec>();
  f.motion = motion_from_json(h.at("motion"));
  f.grid = grid_from_json(h.at("grid"));
  return f;
}

}  // namespace

std::size_t GridSpec::total() const {
  std::size_t t = 1;
  for (int c : count) t *= static_cast<std::size_t>(c);
  return t;
}

Vec GridSpec::point(std::size_t flat_index) const {
  const int d = dim();
  Vec x(d);
  for (int axis = d - 1; axis >= 0; --axis) {
    const std::size_t c = static_cast<std::size_t>(count[axis]);
    x[axis] = origin[axis] + static_cast<double>(flat_index % c) * step[axis];
    flat_index /= c;
  }
  return x;
}

void SampledField::validate() const {
  cap.validate();
  const int n = cap.n;
  if (grid.dim() != n || static_cast<int>(grid.origin.size()) != n ||
      static_cast<int>(grid.step.size()) != n)
    throw DomainError("SampledField: grid dimension does not match the cap");
  for (int c : grid.count)
    if (c <= 0) throw DomainError("SampledField: grid counts must be positive");
  for (double s : grid.step) {
    if (!(s > 0.0)) throw DomainError("SampledField: grid steps must be positive");
    if (s > cap.h / 4.0 * (1.0 + 1e-12))
      throw ResolutionError("SampledField: grid step exceeds h/4, too coarse for wavelength-h oscillation");
  }
  if (!motion.is_identity()) motion.validate(n);
  if (values.size() != grid.total())
    throw DomainError("SampledField: value count does not match the grid");
}

SampledField sample_field(const SpectralCap& cap, const GridSpec& grid,
                          const RigidMotion* motion, const EvalOptions& options) {
  SampledField f;
  f.cap = cap;
  if (motion) f.motion = *motion;
  f.grid = grid;
  f.values.assign(grid.total(), {0.0, 0.0});
  f.validate();
  std::vector<Vec> pts(grid.total());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = grid.point(i);
  f.values = evaluate(cap, pts, motion, options);
  return f;
}

nlohmann::json grid_to_json(const GridSpec& grid) {
  json g;
  g["origin"] = grid.origin;
  g["step"] = grid.step;
  g["count"] = grid.count;
  return g;
}

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec g;
  g.origin = j.at("origin").get<Vec>();
  g.step = j.at("step").get<Vec>();
  g.count = j.at("count").get<std::vector<int>>();
  return g;
}

nlohmann::json motion_to_json(const RigidMotion& motion) {
  json m;
  m["rotation"] = motion.rotation;
  m["translation"] = motion.translation;
  return m;
}

RigidMotion motion_from_json(const nlohmann::json& j) {
  RigidMotion m;
  if (j.is_null()) return m;
  if (j.contains("rotation") && !j.at("rotation").is_null())
    m.rotation = j.at("rotation").get<std::vector<double>>();
  if (j.contains("translation") && !j.at("translation").is_null())
    m.translation = j.at("translation").get<Vec>();
  return m;
}

void write_field_binary(const std::string& path, const SampledField& field,
                        const nlohmann::json& extra) {
  field.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("write_field_binary: cannot open " + path);
  out << header_json(field, extra, "binary").dump() << "\n";
  for (const std::complex<double>& v : field.values) {
    const std::uint64_t re = to_little_endian_bits(v.real());
    const std::uint64_t im = to_little_endian_bits(v.imag());
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!out) throw DomainError("write_field_binary: write failed for " + path);
}

void write_field_json(const std::string& path, const SampledField& field,
                      const nlohmann::json& extra) {
  field.validate();
  json h = header_json(field, extra, "json");
  std::vector<double> flat;
  flat.reserve(field.values.size() * 2);
  for (const std::complex<double>& v : field.values) {
    flat.push_back(v.real());
    flat.push_back(v.imag());
  }
  h["values"] = flat;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("write_field_json: cannot open " + path);
  out << h.dump(2) << "\n";
  if (!out) throw DomainError("write_field_json: write failed for " + path);
}

SampledField read_field(const std::string& path, nlohmann::json* header_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("read_field: cannot open " + path);
  json h;
  std::string storage;
  SampledField f;
  try {
    std::string first_line;
    if (!std::getline(in, first_line)) throw DomainError("read_field: empty file " + path);
    // The JSON variant is pretty-printed over many lines; the binary variant
    // has the whole header on line one.  Try line one, fall back to whole-file.
    try {
      h = json::parse(first_line);
    } catch (const json::exception&) {
      in.clear();
      in.seekg(0);
      h = json::parse(in);
    }
    storage = h.at("storage").get<std::string>();
    f = field_from_header(h);
    const std::size_t total = f.grid.total();
    f.values.resize(total);
    if (storage == "binary") {
      for (std::size_t i = 0; i < total; ++i) {
        std::uint64_t re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        if (!in) throw DomainError("read_field: truncated sample block in " + path);
        f.values[i] = {from_little_endian_bits(re), from_little_endian_bits(im)};
      }
    } else if (storage == "json") {
      const std::vector<double> flat = h.at("values").get<std::vector<double>>();
      if (flat.size() != 2 * total)
        throw DomainError("read_field: value array length does not match the grid in " + path);
      for (std::size_t i = 0; i < total; ++i) f.values[i] = {flat[2 * i], flat[2 * i + 1]};
      h.erase("values");
    } else {
      throw DomainError("read_field: unknown storage kind '" + storage + "' in " + path);
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("read_field: malformed header in ") + path + ": " + e.what());
  }
  f.validate();
  if (header_out) *header_out = h;
  return f;
}

}  // namespace qmlab
