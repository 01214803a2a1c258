#include "chatelet/instance_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "chatelet/errors.hpp"

namespace chatelet {

namespace {

constexpr const char* kGoldenJson = R"({
  "L": [1, 0],
  "C": [1, 0, 1, 1],
  "region": [[[1, 1], [1, 1]], [[2, 1], [1, 1]], [[2, 1], [2, 1]], [[1, 1], [2, 1]]],
  "c": 8
})";

std::int64_t read_int(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw InstanceFormatError("instance key '" + where + "': integer exceeds the signed 64-bit range");
    }
    return v.get<std::int64_t>();
  }
  throw InstanceFormatError("instance key '" + where + "': expected an integer, got " + v.dump());
}

std::vector<std::int64_t> read_coeffs(const nlohmann::json& doc, const char* key, std::size_t count) {
  if (!doc.contains(key)) throw InstanceFormatError(std::string("instance key '") + key + "' is missing");
  const auto& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != count) {
    throw InstanceFormatError(std::string("instance key '") + key + "': expected an array of " +
                              std::to_string(count) + " integers");
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(read_int(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

Rational read_rational(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) {
    throw InstanceFormatError("instance key '" + where + "': expected a [num, den] pair");
  }
  const std::int64_t num = read_int(v[0], where + "[0]");
  const std::int64_t den = read_int(v[1], where + "[1]");
  if (den == 0) throw InstanceFormatError("instance key '" + where + "': zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

}  // namespace

ProblemInstance parse_instance(const nlohmann::json& doc, std::string id) {
  if (!doc.is_object()) throw InstanceFormatError("instance: top level must be a JSON object");
  auto lc = read_coeffs(doc, "L", 2);
  auto cc = read_coeffs(doc, "C", 4);
  if (!doc.contains("region")) throw InstanceFormatError("instance key 'region' is missing");
  const auto& reg = doc.at("region");
  if (!reg.is_array()) throw InstanceFormatError("instance key 'region': expected an array of vertices");
  std::vector<RationalPoint> verts;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const std::string where = "region[" + std::to_string(i) + "]";
    if (!reg[i].is_array() || reg[i].size() != 2) {
      throw InstanceFormatError("instance key '" + where + "': expected two rational coordinates");
    }
    verts.push_back({read_rational(reg[i][0], where + "[0]"), read_rational(reg[i][1], where + "[1]")});
  }
  if (!doc.contains("c")) throw InstanceFormatError("instance key 'c' is missing");
  if (!doc.at("c").is_number()) throw InstanceFormatError("instance key 'c': expected a number");
  const double c = doc.at("c").get<double>();

  try {
    BinaryForm L(1, std::move(lc));
    BinaryForm C(3, std::move(cc));
    Region region(std::move(verts), c);
    return ProblemInstance(std::move(L), std::move(C), std::move(region), std::move(id));
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(std::string("instance: ") + e.what());
  }
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open instance file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceFormatError("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_instance(doc, path.stem().string());
}

nlohmann::json instance_to_json(const ProblemInstance& inst) {
  nlohmann::json doc;
  doc["L"] = std::vector<std::int64_t>(inst.L.coeffs().begin(), inst.L.coeffs().end());
  doc["C"] = std::vector<std::int64_t>(inst.C.coeffs().begin(), inst.C.coeffs().end());
  auto coord = [](const Rational& r) {
    return nlohmann::json::array({boost::multiprecision::numerator(r).convert_to<std::int64_t>(),
                                  boost::multiprecision::denominator(r).convert_to<std::int64_t>()});
  };
  nlohmann::json region = nlohmann::json::array();
  for (const auto& v : inst.region.vertices()) region.push_back({coord(v.x1), coord(v.x2)});
  doc["region"] = region;
  doc["c"] = inst.region.c();
  return doc;
}

ProblemInstance golden_instance() { return parse_instance(nlohmann::json::parse(kGoldenJson), "golden"); }

const char* golden_instance_json() { return kGoldenJson; }

}  // namespace chatelet
