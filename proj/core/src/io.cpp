#include "polyscat/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polyscat/errors.hpp"

namespace polyscat::io {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;
constexpr double kSampleTolerance = 1e-6;

[[noreturn]] void bad(const std::string& what) { throw InputError("invalid file: " + what); }

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected an object around '" + std::string(key) + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing '") + key + "'");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(std::string(what) + " must be finite");
  return x;
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

Vec3 vec3(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) bad(std::string(what) + " must be an array of 3 numbers");
  return Vec3(number(j[0], what), number(j[1], what), number(j[2], what));
}

Complex complex(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) bad(std::string(what) + " must be [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

const char* name(IncidentType t) {
  switch (t) {
    case IncidentType::Plane: return "plane";
    case IncidentType::Dipole: return "dipole";
    case IncidentType::Herglotz: return "herglotz";
  }
  return "";
}

const char* name(Normalization n) { return n == Normalization::Section1 ? "section1" : "section5"; }

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("not JSON (") + e.what() + ")");
  }
}

}  // namespace

std::string to_json(const FarFieldFile& f) {
  Json doc;
  doc["version"] = kFormatVersion;
  doc["k"] = f.k;
  Json inc;
  inc["type"] = name(f.incident.type);
  inc["d"] = to_json(f.incident.d);
  inc["p"] = to_json(f.incident.p);
  inc["normalization"] = name(f.incident.normalization);
  if (f.incident.type == IncidentType::Dipole) inc["y"] = to_json(f.incident.y);
  doc["incident"] = inc;
  doc["basis_center"] = to_json(f.modes.center);
  doc["N"] = f.modes.order;
  Json modes = Json::array();
  for (int n = 1; n <= f.modes.order; ++n)
    for (int m = -n; m <= n; ++m)
      modes.push_back(Json{{"n", n}, {"m", m}, {"cU", to_json(f.modes.u(n, m))}, {"cV", to_json(f.modes.v(n, m))}});
  doc["modes"] = std::move(modes);
  if (f.samples) {
    const auto& rule = *f.samples->rule;
    Json values = Json::array();
    for (const CVec3& v : f.samples->values) {
      Json row = Json::array();
      for (int c = 0; c < 3; ++c) {
        row.push_back(v(c).real());
        row.push_back(v(c).imag());
      }
      values.push_back(std::move(row));
    }
    doc["samples"] = Json{{"rule", Json{{"n_theta", rule.n_theta()}, {"n_phi", rule.n_phi()}}}, {"values", std::move(values)}};
  }
  return doc.dump(1) + "\n";
}

FarFieldFile parse_far_field(const std::string& text) {
  const Json doc = parse_text(text);
  if (integer(member(doc, "version"), "version") != kFormatVersion) bad("unsupported version");
  FarFieldFile f;
  f.k = number(member(doc, "k"), "k");
  if (!(f.k > 0.0)) bad("k must be positive");

  const Json& inc = member(doc, "incident");
  const Json& type = member(inc, "type");
  if (!type.is_string()) bad("incident.type must be a string");
  const std::string t = type.get<std::string>();
  if (t == "plane") f.incident.type = IncidentType::Plane;
  else if (t == "dipole") f.incident.type = IncidentType::Dipole;
  else if (t == "herglotz") f.incident.type = IncidentType::Herglotz;
  else bad("unknown incident.type '" + t + "'");
  f.incident.d = vec3(member(inc, "d"), "incident.d");
  f.incident.p = vec3(member(inc, "p"), "incident.p");
  const Json& norm = member(inc, "normalization");
  if (!norm.is_string()) bad("incident.normalization must be a string");
  if (norm == "section1") f.incident.normalization = Normalization::Section1;
  else if (norm == "section5") f.incident.normalization = Normalization::Section5;
  else bad("unknown incident.normalization");
  if (f.incident.type == IncidentType::Dipole) f.incident.y = vec3(member(inc, "y"), "incident.y");

  const Vec3 center = vec3(member(doc, "basis_center"), "basis_center");
  const int N = integer(member(doc, "N"), "N");
  if (N < 1 || N > 200) bad("N out of range");
  const Json& modes = member(doc, "modes");
  if (!modes.is_array()) bad("modes must be an array");
  if (modes.size() != std::size_t(harmonics::mode_count(N))) bad("modes must cover 1 <= n <= N, |m| <= n exactly");
  f.modes = harmonics::TangentialCoeffs(center, f.k, N);
  std::vector<char> seen(harmonics::mode_count(N), 0);
  for (const Json& e : modes) {
    const int n = integer(member(e, "n"), "mode n");
    const int m = integer(member(e, "m"), "mode m");
    if (n < 1 || n > N || std::abs(m) > n) bad("mode index out of range");
    const int idx = harmonics::flat_index(n, m);
    if (seen[idx]) bad("duplicate mode");
    seen[idx] = 1;
    f.modes.cU[idx] = complex(member(e, "cU"), "cU");
    f.modes.cV[idx] = complex(member(e, "cV"), "cV");
  }

  auto it = doc.find("samples");
  if (it != doc.end()) {
    const Json& rule = member(*it, "rule");
    const int nt = integer(member(rule, "n_theta"), "n_theta");
    const int np = integer(member(rule, "n_phi"), "n_phi");
    if (nt < 1 || np < 1 || nt > 4096 || np > 8192) bad("sample rule out of range");
    const Json& values = member(*it, "values");
    if (!values.is_array() || values.size() != std::size_t(nt) * np) bad("samples.values must have n_theta * n_phi rows");
    harmonics::TangentialField s;
    s.rule = std::make_shared<const harmonics::SphereQuadrature>(nt, np);
    s.values.reserve(values.size());
    for (const Json& row : values) {
      if (!row.is_array() || row.size() != 6) bad("each sample row must have 6 numbers");
      CVec3 v;
      for (int c = 0; c < 3; ++c) v(c) = Complex(number(row[2 * c], "sample"), number(row[2 * c + 1], "sample"));
      s.values.push_back(v);
    }
    harmonics::TangentialCoeffs check;
    try {
      check = harmonics::analyze(s, center, f.k, N);
    } catch (const Error& e) {
      bad(std::string("samples cannot be analysed: ") + e.what());
    }
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < check.cU.size(); ++i) {
      scale = std::max({scale, std::abs(f.modes.cU[i]), std::abs(f.modes.cV[i])});
      err = std::max({err, std::abs(check.cU[i] - f.modes.cU[i]), std::abs(check.cV[i] - f.modes.cV[i])});
    }
    if (err > kSampleTolerance * std::max(scale, 1e-300)) {
      std::ostringstream os;
      os << "samples disagree with modes (max difference " << err << ", scale " << scale << ")";
      bad(os.str());
    }
    f.samples = std::move(s);
  }
  return f;
}

FarFieldFile load_far_field(const std::string& path) { return parse_far_field(read_file(path)); }

void save_far_field(const std::string& path, const FarFieldFile& f) { write_atomic(path, to_json(f)); }

harmonics::TangentialField far_field_on(const FarFieldFile& f, const harmonics::QuadraturePtr& rule) {
  if (f.samples && f.samples->rule->same_rule(*rule)) return *f.samples;
  return harmonics::synthesize(f.modes, rule);
}

ReconFile export_result(const recon::ReconResult& r, const std::string& config) {
  ReconFile f;
  for (std::size_t a = 0; a < r.accepted.size(); ++a)
    f.accepted.push_back({r.accepted_center[a], r.accepted[a].z, r.accepted[a].h, r.accepted_slope[a]});
  std::stable_sort(f.accepted.begin(), f.accepted.end(), [](const AcceptedBall& x, const AcceptedBall& y) {
    return x.center != y.center ? x.center < y.center : x.h < y.h;
  });
  f.voxels = r.occupancy;
  f.config_hash = fnv1a_hex(config);
  f.tool_version = version();
  return f;
}

std::string to_json(const ReconFile& f) {
  Json doc;
  Json balls = Json::array();
  for (const AcceptedBall& b : f.accepted)
    balls.push_back(Json{{"center", b.center}, {"z", to_json(b.z)}, {"h", b.h}, {"slope", b.slope}});
  doc["accepted"] = std::move(balls);
  const std::size_t bits = f.voxels.data.size();
  std::vector<std::uint8_t> packed((bits + 7) / 8, 0);
  for (std::size_t q = 0; q < bits; ++q)
    if (f.voxels.data[q]) packed[q / 8] |= std::uint8_t(1u << (q % 8));
  doc["voxels"] = Json{{"R", f.voxels.R}, {"res", f.voxels.res}, {"data", base64_encode(packed)}};
  doc["provenance"] = Json{{"config_hash", f.config_hash}, {"tool_version", f.tool_version}};
  return doc.dump(1) + "\n";
}

ReconFile parse_recon(const std::string& text) {
  const Json doc = parse_text(text);
  ReconFile f;
  const Json& balls = member(doc, "accepted");
  if (!balls.is_array()) bad("accepted must be an array");
  for (const Json& b : balls) {
    AcceptedBall a;
    a.center = integer(member(b, "center"), "center");
    a.z = vec3(member(b, "z"), "z");
    a.h = number(member(b, "h"), "h");
    a.slope = number(member(b, "slope"), "slope");
    if (a.center < 0 || !(a.h > 0.0)) bad("accepted ball out of range");
    if (!f.accepted.empty()) {
      const AcceptedBall& p = f.accepted.back();
      if (a.center < p.center || (a.center == p.center && a.h <= p.h)) bad("accepted balls not sorted by (center, h)");
    }
    f.accepted.push_back(a);
  }
  const Json& vox = member(doc, "voxels");
  f.voxels.R = number(member(vox, "R"), "R");
  f.voxels.res = integer(member(vox, "res"), "res");
  if (!(f.voxels.R > 0.0) || f.voxels.res < 1 || f.voxels.res > 2048) bad("voxel grid out of range");
  const Json& data = member(vox, "data");
  if (!data.is_string()) bad("voxels.data must be a base64 string");
  const std::vector<std::uint8_t> packed = base64_decode(data.get<std::string>());
  const std::size_t bits = std::size_t(f.voxels.res) * f.voxels.res * f.voxels.res;
  if (packed.size() != (bits + 7) / 8) bad("voxels.data must hold res^3 bits");
  f.voxels.data.resize(bits);
  for (std::size_t q = 0; q < bits; ++q) f.voxels.data[q] = (packed[q / 8] >> (q % 8)) & 1u;
  const Json& prov = member(doc, "provenance");
  const Json& hash = member(prov, "config_hash");
  const Json& ver = member(prov, "tool_version");
  if (!hash.is_string() || !ver.is_string()) bad("provenance entries must be strings");
  f.config_hash = hash.get<std::string>();
  f.tool_version = ver.get<std::string>();
  return f;
}

ReconFile load_recon(const std::string& path) { return parse_recon(read_file(path)); }

void save_recon(const std::string& path, const ReconFile& f) { write_atomic(path, to_json(f)); }

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::size_t n = std::min<std::size_t>(3, bytes.size() - i);
    std::uint32_t w = std::uint32_t(bytes[i]) << 16;
    if (n > 1) w |= std::uint32_t(bytes[i + 1]) << 8;
    if (n > 2) w |= bytes[i + 2];
    out += kAlphabet[(w >> 18) & 63];
    out += kAlphabet[(w >> 12) & 63];
    out += n > 1 ? kAlphabet[(w >> 6) & 63] : '=';
    out += n > 2 ? kAlphabet[w & 63] : '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw InputError("base64 length must be a multiple of 4");
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    std::uint32_t w = 0;
    for (int c = 0; c < 4; ++c) {
      const char ch = text[i + c];
      int v;
      if (ch == '=' && last && c >= 2 && (c == 3 || text[i + 3] == '=')) {
        ++pad;
        v = 0;
      } else {
        v = value(ch);
        if (v < 0 || pad > 0) throw InputError("invalid base64 character");
      }
      w = (w << 6) | std::uint32_t(v);
    }
    out.push_back(std::uint8_t(w >> 16));
    if (pad < 2) out.push_back(std::uint8_t(w >> 8));
    if (pad < 1) out.push_back(std::uint8_t(w));
  }
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot replace " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* version() { return POLYSCAT_VERSION_STRING; }

}  // namespace polyscat::io
