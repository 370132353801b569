#include "relpose/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "relpose/errors.hpp"

namespace relpose {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

// Value parsing with the field path attached to every error.
struct Field {
  const std::string& key;
  const Entry& entry;

  [[noreturn]] void fail(const std::string& why) const {
    std::string where = entry.line > 0 ? "line " + std::to_string(entry.line) + ": " : "";
    throw ConfigError(where + key + ": " + why, key, entry.line);
  }

  double number(const std::string& text) const {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      fail("expected a number, got '" + text + "'");
    }
    return v;
  }
  double number() const { return number(trim(entry.value)); }

  long long integer() const {
    const std::string t = trim(entry.value);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("expected an integer, got '" + t + "'");
    return v;
  }

  std::uint64_t u64() const {
    const std::string t = trim(entry.value);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail("expected an unsigned integer, got '" + t + "'");
    }
    return v;
  }

  bool boolean() const {
    const std::string t = trim(entry.value);
    if (t == "true") return true;
    if (t == "false") return false;
    fail("expected true or false, got '" + t + "'");
  }

  std::vector<double> numbers(std::size_t min_count, std::size_t max_count) const {
    const auto parts = split_list(entry.value);
    if (parts.size() < min_count || parts.size() > max_count) {
      fail("expected " + std::to_string(min_count) +
           (min_count == max_count ? "" : ".." + std::to_string(max_count)) +
           " comma-separated numbers");
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(number(p));
    return out;
  }

  Vec3 vec3() const {
    const auto v = numbers(3, 3);
    return {v[0], v[1], v[2]};
  }

  std::string word() const { return trim(entry.value); }
};

// Lidar beams are described by count and span; collected before building.
struct BeamSpec {
  long long count = 16;
  double min_deg = -15.0;
  double max_deg = 15.0;
};

using Setter = std::function<void(Scenario&, BeamSpec&, const Field&)>;

struct KeySpec {
  const char* name;
  const char* default_value;  // nullptr = required
  Setter apply;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"schema_version", nullptr,
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.schema_version = static_cast<int>(f.integer());
         if (s.schema_version != kSchemaVersion) {
           f.fail("unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
         }
       }},
      {"seed", nullptr, [](Scenario& s, BeamSpec&, const Field& f) { s.seed = f.u64(); }},
      {"duration", nullptr,
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.duration = f.number();
         if (!(s.duration > 0.0)) f.fail("must be > 0");
       }},
      {"drone.width", "0.5",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.drone.width = f.number();
         if (!(s.drone.width > 0.0)) f.fail("must be > 0");
       }},
      {"lidar.beams", "16",
       [](Scenario&, BeamSpec& beams, const Field& f) {
         beams.count = f.integer();
         if (beams.count < 2) f.fail("must be >= 2");
       }},
      {"lidar.beam_min_deg", "-15", [](Scenario&, BeamSpec& beams, const Field& f) { beams.min_deg = f.number(); }},
      {"lidar.beam_max_deg", "15",
       [](Scenario&, BeamSpec& beams, const Field& f) {
         beams.max_deg = f.number();
         if (!(beams.max_deg > beams.min_deg)) f.fail("must exceed lidar.beam_min_deg");
       }},
      {"lidar.azimuth_resolution_deg", "0.2",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.lidar.azimuth_resolution = deg2rad(f.number());
         if (!(s.lidar.azimuth_resolution > 0.0)) f.fail("must be > 0");
       }},
      {"lidar.spin_rate_hz", "10",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.lidar.spin_rate_hz = f.number();
         if (!(s.lidar.spin_rate_hz > 0.0)) f.fail("must be > 0");
       }},
      {"lidar.range_sigma", "0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.lidar.range_sigma = f.number();
         if (!(s.lidar.range_sigma >= 0.0)) f.fail("must be >= 0");
       }},
      {"lidar.max_range", "100",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.lidar.max_range = f.number();
         if (!(s.lidar.max_range > 0.0)) f.fail("must be > 0");
       }},
      {"motor.sweep_rpm", "11.4",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motor.sweep_rpm = f.number();
         if (!(s.motor.sweep_rpm > 0.0)) f.fail("must be > 0");
       }},
      {"motor.sweep_extent_deg", "180",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motor.sweep_extent = deg2rad(f.number());
         if (!(f.number() >= 180.0)) f.fail("must be >= 180");
       }},
      {"motor.vibrate_rpm", "57.2",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motor.vibrate_rpm = f.number();
         if (!(s.motor.vibrate_rpm > 0.0)) f.fail("must be > 0");
       }},
      {"motor.vibrate_amplitude_deg", "5",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motor.vibrate_amplitude = deg2rad(f.number());
         if (!(s.motor.vibrate_amplitude > 0.0)) f.fail("must be > 0");
       }},
      {"motor.vibrate_period", "0.12",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motor.vibrate_period = f.number();
         if (!(s.motor.vibrate_period > 0.0)) f.fail("must be > 0");
       }},
      {"projection.n", "512",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long n = f.integer();
         if (n < 64 || n % 2 != 0 || n > 8192) f.fail("must be even and in [64, 8192]");
         s.projection.n = static_cast<int>(n);
       }},
      {"projection.half_fov_deg", "60",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const double d = f.number();
         if (!(d > 0.0 && d < 90.0)) f.fail("must be in (0, 90)");
         s.projection.half_fov = deg2rad(d);
       }},
      {"projection.view_dir", "0, 0, 1",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const Vec3 v = f.vec3();
         if (!(v.norm() > 0.0)) f.fail("must be nonzero");
         s.projection.view_dir = v.normalized();
       }},
      {"kernel.drone_width", "0.5",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.kernel.drone_width = f.number();
         if (!(s.kernel.drone_width > 0.0)) f.fail("must be > 0");
       }},
      {"kernel.outer_width", "20",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long w = f.integer();
         if (w < 1 || w > 1000) f.fail("must be in [1, 1000]");
         s.kernel.outer_width = static_cast<int>(w);
       }},
      {"kernel.epsilon", "0.1",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.kernel.epsilon = f.number();
         if (!(s.kernel.epsilon > 0.0)) f.fail("must be > 0");
       }},
      {"kernel.max_inner", "101",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long m = f.integer();
         if (m < 1 || m % 2 == 0 || m > 10001) f.fail("must be odd and in [1, 10001]");
         s.kernel.max_inner = static_cast<int>(m);
       }},
      {"kernel.inner_skip_empty", "false",
       [](Scenario& s, BeamSpec&, const Field& f) { s.kernel.inner_skip_empty = f.boolean(); }},
      {"meanshift.radius", "1",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.meanshift.radius = f.number();
         if (!(s.meanshift.radius > 0.0)) f.fail("must be > 0");
       }},
      {"meanshift.iterations", "10",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long n = f.integer();
         if (n < 1 || n > 100000) f.fail("must be in [1, 100000]");
         s.meanshift.iterations = static_cast<int>(n);
       }},
      {"meanshift.track_iterations", "3",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long n = f.integer();
         if (n < 1 || n > 100000) f.fail("must be in [1, 100000]");
         s.meanshift.track_iterations = static_cast<int>(n);
       }},
      {"meanshift.bandwidth", "1",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.meanshift.bandwidth = f.number();
         if (!(s.meanshift.bandwidth > 0.0)) f.fail("must be > 0");
       }},
      {"meanshift.requery", "false",
       [](Scenario& s, BeamSpec&, const Field& f) { s.meanshift.requery = f.boolean(); }},
      {"tracker.max_misses", "5",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long n = f.integer();
         if (n < 1 || n > 1000000) f.fail("must be >= 1");
         s.meanshift.max_misses = static_cast<int>(n);
       }},
      {"tracker.center_offset", "0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.center_offset = f.number();
         if (!(s.center_offset >= 0.0)) f.fail("must be >= 0");
       }},
      {"vd.sigma_deg", "0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.indirect.vd_sigma = deg2rad(f.number());
         if (!(s.indirect.vd_sigma >= 0.0)) f.fail("must be >= 0");
       }},
      {"vd.scramble", "true", [](Scenario& s, BeamSpec&, const Field& f) { s.indirect.scramble = f.boolean(); }},
      {"vd.axis.0", "1, 0, 0",
       [](Scenario& s, BeamSpec&, const Field& f) { s.indirect.world_axes.col(0) = f.vec3(); }},
      {"vd.axis.1", "0, 1, 0",
       [](Scenario& s, BeamSpec&, const Field& f) { s.indirect.world_axes.col(1) = f.vec3(); }},
      {"vd.axis.2", "0, 0, 1",
       [](Scenario& s, BeamSpec&, const Field& f) { s.indirect.world_axes.col(2) = f.vec3(); }},
      {"ego.sigma_deg", "0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.indirect.ego_sigma = deg2rad(f.number());
         if (!(s.indirect.ego_sigma >= 0.0)) f.fail("must be >= 0");
       }},
      {"rotation.initial_offset_deg", "0, 0, 0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const Vec3 v = f.vec3();
         s.initial_offset = {deg2rad(v.x()), deg2rad(v.y()), deg2rad(v.z())};
       }},
      {"rotation.max_rate_deg", "20",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.rotation_max_rate = deg2rad(f.number());
         if (!(s.rotation_max_rate > 0.0)) f.fail("must be > 0");
       }},
      {"rotation.policy", "two-best",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const std::string w = f.word();
         if (w == "two-best") s.rotation_policy = RotationPolicy::kTwoBestPairs;
         else if (w == "all-three") s.rotation_policy = RotationPolicy::kAllThree;
         else f.fail("expected two-best or all-three");
       }},
      {"motion.window", "7",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long n = f.integer();
         if (n < 1 || n > 10000) f.fail("must be in [1, 10000]");
         s.motion.window = static_cast<int>(n);
       }},
      {"motion.cone_deg", "30",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motion.cone = deg2rad(f.number());
         if (!(s.motion.cone > 0.0)) f.fail("must be > 0");
       }},
      {"motion.gap", "14",
       [](Scenario& s, BeamSpec&, const Field& f) {
         const long long n = f.integer();
         if (n < 1 || n > 100000) f.fail("must be in [1, 100000]");
         s.motion.gap = static_cast<int>(n);
       }},
      {"motion.min_distance", "1",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.motion.min_distance = f.number();
         if (!(s.motion.min_distance > 0.0)) f.fail("must be > 0");
       }},
      {"vehicle.position_noise", "0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.vehicle_position_noise = f.number();
         if (!(s.vehicle_position_noise >= 0.0)) f.fail("must be >= 0");
       }},
      {"vehicle.rotation_noise_deg", "0",
       [](Scenario& s, BeamSpec&, const Field& f) {
         s.vehicle_rotation_noise = deg2rad(f.number());
         if (!(s.vehicle_rotation_noise >= 0.0)) f.fail("must be >= 0");
       }},
  };
  return specs;
}

Waypoint parse_waypoint(const Field& f) {
  const auto v = f.numbers(4, 7);
  Waypoint w;
  w.time = v[0];
  w.position = {v[1], v[2], v[3]};
  // yaw, pitch, roll in degrees.
  if (v.size() > 4) w.attitude.rz = deg2rad(v[4]);
  if (v.size() > 5) w.attitude.ry = deg2rad(v[5]);
  if (v.size() > 6) w.attitude.rx = deg2rad(v[6]);
  return w;
}

bool parse_index(const std::string& text, std::size_t& out) {
  if (text.empty() || text.size() > 6) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Stable ordering for indexed keys: by numeric index, then by name.
struct IndexedKey {
  std::size_t index;
  std::string key;
  bool operator<(const IndexedKey& o) const {
    return index != o.index ? index < o.index : key < o.key;
  }
};

Trajectory build_trajectory(const std::string& prefix,
                            const std::map<IndexedKey, Entry>& waypoints) {
  std::vector<Waypoint> list;
  const Entry* last = nullptr;
  const std::string* last_key = nullptr;
  for (const auto& [k, e] : waypoints) {
    list.push_back(parse_waypoint(Field{k.key, e}));
    last = &e;
    last_key = &k.key;
  }
  if (list.size() < 2) {
    const Entry none{};
    const std::string key = prefix + ".waypoint";
    Field{key, last ? *last : none}.fail("at least 2 waypoints are required");
  }
  try {
    return Trajectory(std::move(list));
  } catch (const std::invalid_argument& ex) {
    Field{*last_key, *last}.fail(ex.what());
  }
}

}  // namespace

std::pair<std::string, std::string> split_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + kv + "': expected key=value", kv, 0);
  }
  std::string key = trim(std::string_view(kv).substr(0, eq));
  std::string value = trim(std::string_view(kv).substr(eq + 1));
  if (key.empty()) throw ConfigError("override '" + kv + "': empty key", kv, 0);
  return {key, value};
}

void Scenario::validate() const {
  if (schema_version != kSchemaVersion) throw ConfigError("schema_version: unsupported", "schema_version");
  if (!(duration > 0.0)) throw ConfigError("duration: must be > 0", "duration");
  if (!(drone.width > 0.0)) throw ConfigError("drone.width: must be > 0", "drone.width");
  auto wrap = [](const char* field, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string(field) + ": " + ex.what(), field);
    } catch (const DegenerateGeometry& ex) {
      throw ConfigError(std::string(field) + ": " + ex.what(), field);
    }
  };
  wrap("lidar", [&] { lidar.validate(); });
  wrap("projection", [&] { projection.validate(); });
  wrap("kernel", [&] { kernel.validate(); });
  wrap("meanshift", [&] { meanshift.validate(); });
  wrap("vd", [&] { indirect.validate(); });
  wrap("motion", [&] { motion.validate(); });
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const std::string field = "scene." + std::to_string(i);
    wrap(field.c_str(), [&] { relpose::validate(scene[i]); });
  }
}

Scenario parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> entries;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", "", line_no);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key", "", line_no);
    }
    if (entries.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": duplicate key", key,
                        line_no);
    }
    entries[key] = {trim(std::string_view(line).substr(eq + 1)), line_no};
  }
  for (const auto& kv : overrides) {
    auto [key, value] = split_override(kv);
    entries[key] = {value, 0};
  }

  Scenario s;
  BeamSpec beams;
  const auto& specs = key_specs();

  std::map<IndexedKey, Entry> drone_wp, vehicle_wp;
  std::map<std::size_t, std::map<std::string, std::pair<std::string, Entry>>> prims;

  // Classify keys; anything not in the schema is rejected.
  for (const auto& [key, entry] : entries) {
    const bool known = std::any_of(specs.begin(), specs.end(),
                                   [&](const KeySpec& k) { return key == k.name; });
    if (known) continue;
    std::size_t idx = 0;
    auto starts = [&](const std::string& p) { return key.rfind(p, 0) == 0; };
    if (starts("drone.waypoint.") && parse_index(key.substr(15), idx)) {
      drone_wp[{idx, key}] = entry;
    } else if (starts("vehicle.waypoint.") && parse_index(key.substr(17), idx)) {
      vehicle_wp[{idx, key}] = entry;
    } else if (starts("scene.")) {
      const auto dot = key.find('.', 6);
      const std::string field = dot == std::string::npos ? "" : key.substr(dot + 1);
      static const std::vector<std::string> fields = {"kind", "center", "size", "count",
                                                      "layout_seed"};
      if (dot == std::string::npos || !parse_index(key.substr(6, dot - 6), idx) ||
          std::find(fields.begin(), fields.end(), field) == fields.end()) {
        Field{key, entry}.fail("unknown key");
      }
      prims[idx][field] = {key, entry};
    } else {
      Field{key, entry}.fail("unknown key");
    }
  }

  for (const auto& spec : specs) {
    const auto it = entries.find(spec.name);
    Entry e;
    if (it != entries.end()) {
      e = it->second;
    } else if (spec.default_value != nullptr) {
      e.value = spec.default_value;
    } else {
      throw ConfigError(std::string(spec.name) + ": required key is missing", spec.name, 0);
    }
    spec.apply(s, beams, Field{spec.name, e});
    s.settings.emplace_back(spec.name, trim(e.value));
  }

  s.lidar.beam_offsets.clear();
  for (long long i = 0; i < beams.count; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(beams.count - 1);
    s.lidar.beam_offsets.push_back(deg2rad(beams.min_deg + a * (beams.max_deg - beams.min_deg)));
  }

  for (const auto* wps : {&drone_wp, &vehicle_wp}) {
    for (const auto& [k, e] : *wps) s.settings.emplace_back(k.key, trim(e.value));
  }
  for (const auto& [idx, fields] : prims) {
    for (const auto& [name, kv] : fields) s.settings.emplace_back(kv.first, trim(kv.second.value));
  }

  s.trajectories.drone = build_trajectory("drone", drone_wp);
  if (vehicle_wp.empty()) {
    s.trajectories.vehicle = Trajectory({Waypoint{0.0, Vec3::Zero(), {}},
                                         Waypoint{1.0, Vec3::Zero(), {}}});
  } else {
    s.trajectories.vehicle = build_trajectory("vehicle", vehicle_wp);
  }

  for (const auto& [idx, fields] : prims) {
    ScenePrimitive p;
    auto get = [&](const std::string& name) -> const std::pair<std::string, Entry>* {
      const auto it = fields.find(name);
      return it == fields.end() ? nullptr : &it->second;
    };
    const std::string base = "scene." + std::to_string(idx);
    const auto* kind = get("kind");
    if (!kind) throw ConfigError(base + ".kind: required key is missing", base + ".kind");
    const Field kf{kind->first, kind->second};
    const std::string k = kf.word();
    if (k == "sphere") p.kind = PrimitiveKind::kSphere;
    else if (k == "box") p.kind = PrimitiveKind::kBox;
    else if (k == "ground-plane") p.kind = PrimitiveKind::kGroundPlane;
    else if (k == "sparse-blob") p.kind = PrimitiveKind::kSparseBlob;
    else kf.fail("expected sphere, box, ground-plane or sparse-blob");

    if (const auto* c = get("center")) p.center = Field{c->first, c->second}.vec3();
    if (const auto* d = get("size")) {
      const Field f{d->first, d->second};
      const auto v = f.numbers(1, 3);
      p.dimensions = Vec3(v[0], v.size() > 1 ? v[1] : v[0], v.size() > 2 ? v[2] : v[0]);
    } else if (p.kind != PrimitiveKind::kGroundPlane) {
      throw ConfigError(base + ".size: required key is missing", base + ".size");
    }
    if (const auto* c = get("count")) {
      const Field f{c->first, c->second};
      const long long n = f.integer();
      if (n < 1 || n > 100000) f.fail("must be in [1, 100000]");
      p.count = static_cast<int>(n);
    }
    p.layout_seed = idx;
    if (const auto* c = get("layout_seed")) p.layout_seed = Field{c->first, c->second}.u64();
    try {
      relpose::validate(p);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(base + ": " + ex.what(), base);
    }
    s.scene.push_back(p);
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file '" + path + "'", "", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), overrides);
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string vec(const Vec3& v) { return num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()); }

std::string waypoint(const Waypoint& w) {
  return num(w.time) + ", " + vec(w.position) + ", " + num(rad2deg(w.attitude.rz)) + ", " +
         num(rad2deg(w.attitude.ry)) + ", " + num(rad2deg(w.attitude.rx));
}

const char* kind_name(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::kSphere: return "sphere";
    case PrimitiveKind::kBox: return "box";
    case PrimitiveKind::kGroundPlane: return "ground-plane";
    case PrimitiveKind::kSparseBlob: return "sparse-blob";
  }
  return "?";
}

}  // namespace

std::string format_scenario(const Scenario& s) {
  std::ostringstream os;
  if (!s.settings.empty()) {
    for (const auto& [k, v] : s.settings) os << k << " = " << v << '\n';
    return os.str();
  }
  auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << '\n'; };
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  kv("schema_version", std::to_string(s.schema_version));
  kv("seed", std::to_string(s.seed));
  kv("duration", num(s.duration));
  kv("drone.width", num(s.drone.width));
  for (std::size_t i = 0; i < s.trajectories.drone.waypoints().size(); ++i) {
    kv("drone.waypoint." + std::to_string(i), waypoint(s.trajectories.drone.waypoints()[i]));
  }
  for (std::size_t i = 0; i < s.trajectories.vehicle.waypoints().size(); ++i) {
    kv("vehicle.waypoint." + std::to_string(i), waypoint(s.trajectories.vehicle.waypoints()[i]));
  }
  for (std::size_t i = 0; i < s.scene.size(); ++i) {
    const auto& p = s.scene[i];
    const std::string base = "scene." + std::to_string(i);
    kv(base + ".kind", kind_name(p.kind));
    kv(base + ".center", vec(p.center));
    kv(base + ".size", vec(p.dimensions));
    if (p.kind == PrimitiveKind::kSparseBlob) kv(base + ".count", std::to_string(p.count));
    kv(base + ".layout_seed", std::to_string(p.layout_seed));
  }
  const auto& beams = s.lidar.beam_offsets;
  kv("lidar.beams", std::to_string(beams.size()));
  kv("lidar.beam_min_deg", num(beams.empty() ? 0.0 : rad2deg(beams.front())));
  kv("lidar.beam_max_deg", num(beams.empty() ? 0.0 : rad2deg(beams.back())));
  kv("lidar.azimuth_resolution_deg", num(rad2deg(s.lidar.azimuth_resolution)));
  kv("lidar.spin_rate_hz", num(s.lidar.spin_rate_hz));
  kv("lidar.range_sigma", num(s.lidar.range_sigma));
  kv("lidar.max_range", num(s.lidar.max_range));
  kv("motor.sweep_rpm", num(s.motor.sweep_rpm));
  kv("motor.sweep_extent_deg", num(rad2deg(s.motor.sweep_extent)));
  kv("motor.vibrate_rpm", num(s.motor.vibrate_rpm));
  kv("motor.vibrate_amplitude_deg", num(rad2deg(s.motor.vibrate_amplitude)));
  kv("motor.vibrate_period", num(s.motor.vibrate_period));
  kv("projection.n", std::to_string(s.projection.n));
  kv("projection.half_fov_deg", num(rad2deg(s.projection.half_fov)));
  kv("projection.view_dir", vec(s.projection.view_dir));
  kv("kernel.drone_width", num(s.kernel.drone_width));
  kv("kernel.outer_width", std::to_string(s.kernel.outer_width));
  kv("kernel.epsilon", num(s.kernel.epsilon));
  kv("kernel.max_inner", std::to_string(s.kernel.max_inner));
  kv("kernel.inner_skip_empty", b(s.kernel.inner_skip_empty));
  kv("meanshift.radius", num(s.meanshift.radius));
  kv("meanshift.iterations", std::to_string(s.meanshift.iterations));
  kv("meanshift.track_iterations", std::to_string(s.meanshift.track_iterations));
  kv("meanshift.bandwidth", num(s.meanshift.bandwidth));
  kv("meanshift.requery", b(s.meanshift.requery));
  kv("tracker.max_misses", std::to_string(s.meanshift.max_misses));
  kv("tracker.center_offset", num(s.center_offset));
  kv("vd.sigma_deg", num(rad2deg(s.indirect.vd_sigma)));
  kv("vd.scramble", b(s.indirect.scramble));
  for (int i = 0; i < 3; ++i) kv("vd.axis." + std::to_string(i), vec(s.indirect.world_axes.col(i)));
  kv("ego.sigma_deg", num(rad2deg(s.indirect.ego_sigma)));
  kv("rotation.initial_offset_deg",
     vec(Vec3(rad2deg(s.initial_offset.rx), rad2deg(s.initial_offset.ry),
              rad2deg(s.initial_offset.rz))));
  kv("rotation.max_rate_deg", num(rad2deg(s.rotation_max_rate)));
  kv("rotation.policy", s.rotation_policy == RotationPolicy::kAllThree ? "all-three" : "two-best");
  kv("motion.window", std::to_string(s.motion.window));
  kv("motion.cone_deg", num(rad2deg(s.motion.cone)));
  kv("motion.gap", std::to_string(s.motion.gap));
  kv("motion.min_distance", num(s.motion.min_distance));
  kv("vehicle.position_noise", num(s.vehicle_position_noise));
  kv("vehicle.rotation_noise_deg", num(rad2deg(s.vehicle_rotation_noise)));
  return os.str();
}

}  // namespace relpose
