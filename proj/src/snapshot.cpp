#include "hrf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace hrf {

namespace {

constexpr char magic[8] = {'H', 'R', 'F', 'S', 'N', 'A', 'P', '1'};
constexpr std::uint8_t type_f64 = 1;
constexpr std::uint8_t type_i64 = 2;

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_f64(std::string& out, const std::string& key, const std::vector<double>& values) {
  put<std::uint16_t>(out, static_cast<std::uint16_t>(key.size()));
  out += key;
  put<std::uint8_t>(out, type_f64);
  put<std::uint64_t>(out, values.size());
  for (double v : values) put(out, v);
}

void put_i64(std::string& out, const std::string& key, std::int64_t value) {
  put<std::uint16_t>(out, static_cast<std::uint16_t>(key.size()));
  out += key;
  put<std::uint8_t>(out, type_i64);
  put<std::uint64_t>(out, 1);
  put(out, value);
}

struct Record {
  std::uint8_t type = 0;
  std::vector<double> f64;
  std::vector<std::int64_t> i64;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw SnapshotError("snapshot truncated");
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string get_string(std::size_t len) {
    if (pos_ + len > bytes_.size()) throw SnapshotError("snapshot truncated");
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

std::vector<double> field_values(const ScalarField& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

std::string encode_snapshot(const FlowState& state) {
  const auto& target = state.phi.target();
  std::string out(magic, sizeof(magic));
  put<std::uint32_t>(out, 10);
  put_i64(out, "n", state.grid()->n());
  put_i64(out, "m", target.dimension());
  put_i64(out, "flat", target.is_sphere() ? 0 : 1);
  put_f64(out, "r", {target.radius()});
  put_f64(out, "t", {state.t});
  put_f64(out, "g0", {state.g0.a(), state.g0.b(), state.g0.c()});
  put_f64(out, "alpha", {state.alpha(state.t)});
  std::vector<double> knots;
  for (const auto& [t, a] : state.alpha.knots()) {
    knots.push_back(t);
    knots.push_back(a);
  }
  put_f64(out, "alpha_schedule", knots);
  put_f64(out, "u", field_values(state.u));
  std::vector<double> phi;
  for (const auto& f : state.phi.fields()) phi.insert(phi.end(), f.values().begin(), f.values().end());
  put_f64(out, "phi", phi);
  return out;
}

FlowState decode_snapshot(const std::string& bytes) {
  if (bytes.size() < sizeof(magic) || std::memcmp(bytes.data(), magic, sizeof(magic)) != 0) {
    throw SnapshotError("not a snapshot file (bad magic)");
  }
  Reader in(bytes);
  in.get_string(sizeof(magic));
  const auto count = in.get<std::uint32_t>();
  std::map<std::string, Record> records;
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto len = in.get<std::uint16_t>();
    const std::string key = in.get_string(len);
    Record rec;
    rec.type = in.get<std::uint8_t>();
    const auto n = in.get<std::uint64_t>();
    if (n > bytes.size()) throw SnapshotError("record '" + key + "' has an impossible length");
    for (std::uint64_t j = 0; j < n; ++j) {
      if (rec.type == type_f64) {
        rec.f64.push_back(in.get<double>());
      } else if (rec.type == type_i64) {
        rec.i64.push_back(in.get<std::int64_t>());
      } else {
        throw SnapshotError("record '" + key + "' has unknown type");
      }
    }
    records[key] = std::move(rec);
  }
  if (!in.done()) throw SnapshotError("trailing bytes after last record");

  auto f64 = [&](const std::string& key, std::size_t expected) -> const std::vector<double>& {
    const auto it = records.find(key);
    if (it == records.end() || it->second.type != type_f64) throw SnapshotError("missing record '" + key + "'");
    if (expected != 0 && it->second.f64.size() != expected) {
      throw SnapshotError("record '" + key + "' has wrong length");
    }
    return it->second.f64;
  };
  auto i64 = [&](const std::string& key) {
    const auto it = records.find(key);
    if (it == records.end() || it->second.type != type_i64 || it->second.i64.size() != 1) {
      throw SnapshotError("missing record '" + key + "'");
    }
    return it->second.i64.front();
  };

  try {
    const auto n = static_cast<int>(i64("n"));
    const auto m = static_cast<int>(i64("m"));
    const bool flat = i64("flat") != 0;
    const double r = f64("r", 1)[0];
    const Target target = flat ? Target::flat(m) : Target::sphere(m, r);
    const GridPtr grid = Grid::create(n);
    const auto& g = f64("g0", 3);
    const auto& sched = f64("alpha_schedule", 0);
    if (sched.empty() || sched.size() % 2 != 0) throw SnapshotError("record 'alpha_schedule' has odd length");
    std::vector<std::pair<double, double>> knots;
    for (std::size_t k = 0; k < sched.size(); k += 2) knots.emplace_back(sched[k], sched[k + 1]);

    const std::size_t size = grid->size();
    const auto& u = f64("u", size);
    const auto& phi_values = f64("phi", size * static_cast<std::size_t>(target.components()));
    std::vector<ScalarField> comps;
    for (int c = 0; c < target.components(); ++c) {
      const auto begin = phi_values.begin() + static_cast<std::ptrdiff_t>(c * size);
      comps.emplace_back(grid, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(size)));
    }
    f64("alpha", 1);
    return FlowState{f64("t", 1)[0], FlatMetric(g[0], g[1], g[2]), ScalarField(grid, u),
                     MapField(target, std::move(comps)), AlphaSchedule::piecewise_linear(std::move(knots))};
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(std::string("invalid snapshot contents: ") + e.what());
  }
}

void write_snapshot(const std::string& path, const FlowState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot open '" + path + "' for writing");
  const std::string bytes = encode_snapshot(state);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("failed writing '" + path + "'");
}

FlowState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return decode_snapshot(ss.str());
}

}  // namespace hrf
