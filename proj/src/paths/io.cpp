#include "compatlab/paths/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

namespace compatlab::paths {

namespace {

constexpr std::string_view kMagic = "#compatlab-ensemble ";

template <class T>
T parse_field(std::string_view s, std::size_t line) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("ensemble row " + std::to_string(line) + ": malformed field '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_ensemble(std::ostream& out, const PathEnsemble& e, const nlohmann::json& summary) {
  nlohmann::json header{{"schema", kEnsembleSchema},
                        {"grid", {{"horizon", e.grid().horizon()}, {"steps", e.grid().steps()}}},
                        {"paths", e.paths()},
                        {"dims", e.dims()},
                        {"seed", e.provenance().seed},
                        {"spec_hash", e.provenance().spec_hash},
                        {"tag", e.provenance().tag},
                        {"summary", summary}};
  out << kMagic << header.dump() << '\n' << "path,step,dim,value\n";
  char buf[96];
  for (std::size_t p = 0; p < e.paths(); ++p)
    for (std::size_t k = 0; k < e.points(); ++k)
      for (std::size_t j = 0; j < e.dims(); ++j) {
        int n = std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.17g\n", p, k, j, e(p, k, j));
        out.write(buf, n);
      }
}

EnsembleFile read_ensemble(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.compare(0, kMagic.size(), kMagic) != 0)
    throw ConfigError("not an ensemble file: missing '#compatlab-ensemble' header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line.substr(kMagic.size()));
    if (header.at("schema") != kEnsembleSchema) throw ConfigError("unsupported ensemble schema");
    TimeGrid grid(header.at("grid").at("horizon").get<double>(), header.at("grid").at("steps").get<std::size_t>());
    Provenance prov{header.at("seed").get<std::uint64_t>(), header.at("spec_hash").get<std::string>(),
                    header.at("tag").get<std::string>()};
    PathEnsemble e(grid, header.at("paths").get<std::size_t>(), header.at("dims").get<std::size_t>(), prov);
    if (!std::getline(in, line) || line != "path,step,dim,value") throw ConfigError("missing ensemble column header");
    const std::size_t expected = e.paths() * e.points() * e.dims();
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::string_view s(line);
      std::size_t fields[3];
      for (auto& f : fields) {
        auto comma = s.find(',');
        if (comma == std::string_view::npos) throw ConfigError("ensemble row " + std::to_string(rows) + " is short");
        f = parse_field<std::size_t>(s.substr(0, comma), rows);
        s.remove_prefix(comma + 1);
      }
      if (fields[0] >= e.paths() || fields[1] >= e.points() || fields[2] >= e.dims())
        throw ConfigError("ensemble row " + std::to_string(rows) + " is out of range");
      e(fields[0], fields[1], fields[2]) = parse_field<double>(s, rows);
      ++rows;
    }
    if (rows != expected)
      throw ConfigError("ensemble has " + std::to_string(rows) + " rows, expected " + std::to_string(expected));
    return {std::move(e), std::move(header)};
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed ensemble header: ") + ex.what());
  } catch (const PreconditionError& ex) {
    throw ConfigError(std::string("invalid ensemble header: ") + ex.what());
  }
}

}  // namespace compatlab::paths
