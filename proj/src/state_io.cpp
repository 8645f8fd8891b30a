#include "lossent/state_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "lossent/error.hpp"

namespace lossent {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "lossent-state";

void put_f64(std::ostream& os, double v) {
  static_assert(sizeof(double) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(buf, 8);
}

double get_f64(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) throw InvalidInput("state file is truncated", "data");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const DimVector& dims_of(const StateRef& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return p->dims();
  return std::get<DensityMatrix>(s).dims();
}

DensityMatrix to_density(const StateRef& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return p->projector();
  return std::get<DensityMatrix>(s);
}

Ownership ownership_or_trivial(const StateFile& f) {
  return f.ownership ? *f.ownership : Ownership::trivial(dims_of(f.state));
}

void write_state(std::ostream& os, const StateFile& f, Encoding enc) {
  const bool pure = std::holds_alternative<PureState>(f.state);
  json header = {{"format", kFormat},
                 {"version", 1},
                 {"kind", pure ? "pure" : "density"},
                 {"encoding", enc == Encoding::Binary ? "binary" : "text"},
                 {"dims", dims_of(f.state).values()}};
  if (f.ownership) {
    header["parties"] = f.ownership->names();
    header["particles"] = f.ownership->particle_dims();
  }
  os << header.dump() << '\n';
  std::vector<Complex> entries;
  if (pure) {
    const CVector& a = std::get<PureState>(f.state).amps();
    entries.assign(a.data(), a.data() + a.size());
  } else {
    const CMatrix& m = std::get<DensityMatrix>(f.state).mat();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(m(r, c));
  }
  for (const Complex& z : entries) {
    if (enc == Encoding::Binary) {
      put_f64(os, z.real());
      put_f64(os, z.imag());
    } else {
      os << fmt(z.real()) << ',' << fmt(z.imag()) << '\n';
    }
  }
}

void write_state_file(const std::string& path, const StateFile& f, Encoding enc) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open '" + path + "' for writing", "output");
  write_state(os, f, enc);
}

StateFile read_state(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("state file is empty", "header");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("state header is not JSON: ") + e.what(), "header");
  }
  if (h.value("format", "") != kFormat) throw InvalidInput("not a lossent state file", "header.format");
  if (h.value("version", 0) != 1) throw InvalidInput("unsupported state file version", "header.version");
  const std::string kind = h.value("kind", "");
  const std::string enc = h.value("encoding", "binary");
  const DimVector dims(h.at("dims").get<std::vector<std::size_t>>());
  const std::size_t count = kind == "pure" ? dims.total() : dims.total() * dims.total();
  if (kind != "pure" && kind != "density") throw InvalidInput("unknown state kind '" + kind + "'", "header.kind");
  std::vector<Complex> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (enc == "binary") {
      const double re = get_f64(is);
      const double im = get_f64(is);
      entries.emplace_back(re, im);
    } else {
      std::string row;
      if (!std::getline(is, row)) throw InvalidInput("state file is truncated", "data");
      const auto comma = row.find(',');
      if (comma == std::string::npos) throw InvalidInput("malformed text entry on data line " + std::to_string(i + 1), "data");
      entries.emplace_back(std::stod(row.substr(0, comma)), std::stod(row.substr(comma + 1)));
    }
  }
  auto make = [&]() -> StateRef {
    if (kind == "pure") {
      CVector a(static_cast<Eigen::Index>(count));
      for (std::size_t i = 0; i < count; ++i) a[static_cast<Eigen::Index>(i)] = entries[i];
      return PureState(std::move(a), dims);
    }
    const auto n = static_cast<Eigen::Index>(dims.total());
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = entries[static_cast<std::size_t>(r * n + c)];
    return DensityMatrix(std::move(m), dims);
  };
  StateFile f{make(), std::nullopt};
  if (h.contains("parties")) {
    f.ownership = Ownership(h.at("parties").get<std::vector<std::string>>(),
                            h.at("particles").get<std::vector<std::vector<std::size_t>>>());
    f.ownership->check_against(dims);
  }
  return f;
}

StateFile read_state_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open '" + path + "'", "input");
  return read_state(is);
}

}  // namespace lossent
