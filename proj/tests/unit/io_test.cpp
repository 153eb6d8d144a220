#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "polyscat/errors.hpp"
#include "polyscat/io.hpp"
#include "polyscat/mie.hpp"

namespace polyscat::io {
namespace {

FarFieldFile ball_file(bool with_samples) {
  const double k = 2.0;
  const fields::PlaneWaveParams pw{Vec3(0, 0.6, 0.8), Vec3::UnitX()};
  const mie::TestBall ball{Vec3(0.3, 0, 0), 0.5};
  const auto spectrum = mie::pec_ball_spectrum(k, ball.h, 12);
  FarFieldFile f;
  f.k = k;
  f.incident.d = pw.d;
  f.incident.p = pw.p;
  f.modes = mie::far_field_coeffs(ball, spectrum, pw);
  if (with_samples) f.samples = harmonics::synthesize(f.modes, harmonics::make_rule(harmonics::required_n_theta(12, k, ball.z.norm())));
  return f;
}

TEST(Base64, KnownVectorsAndRoundTrip) {
  auto enc = [](const std::string& s) { return base64_encode(std::vector<std::uint8_t>(s.begin(), s.end())); };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
  std::vector<std::uint8_t> bytes(1000);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = std::uint8_t(i * 37 + 11);
  for (std::size_t n : {0u, 1u, 2u, 3u, 999u, 1000u}) {
    std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + n);
    EXPECT_EQ(base64_decode(base64_encode(part)), part);
  }
  EXPECT_THROW(base64_decode("Zg="), InputError);
  EXPECT_THROW(base64_decode("Z*=="), InputError);
  EXPECT_THROW(base64_decode("Zg==Zg=="), InputError);
}

TEST(Fnv, KnownValues) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(FarFieldFile, RoundTripIsExact) {
  for (bool samples : {false, true}) {
    const FarFieldFile f = ball_file(samples);
    const std::string text = to_json(f);
    const FarFieldFile back = parse_far_field(text);
    EXPECT_EQ(back.modes.order, f.modes.order);
    EXPECT_EQ(back.modes.cU, f.modes.cU);
    EXPECT_EQ(back.modes.cV, f.modes.cV);
    EXPECT_EQ(back.samples.has_value(), samples);
    EXPECT_EQ(to_json(back), text);
  }
}

TEST(FarFieldFile, SamplesMustMatchModes) {
  FarFieldFile f = ball_file(true);
  f.samples->values[5](1) += 1.0;
  EXPECT_THROW(parse_far_field(to_json(f)), InputError);
}

TEST(FarFieldFile, SchemaViolations) {
  const std::string good = to_json(ball_file(false));
  EXPECT_NO_THROW(parse_far_field(good));
  auto with = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return s.replace(pos, from.size(), to);
  };
  const std::string cases[] = {
      "",
      "{}",
      "[1, 2]",
      with("\"version\": 1", "\"version\": 2"),
      with("\"k\": 2.0", "\"k\": -2.0"),
      with("\"plane\"", "\"spherical\""),
      with("\"N\": 12", "\"N\": 11"),
      with("\"N\": 12", "\"N\": 1.5"),
      with("\"m\": -1", "\"m\": -7"),
  };
  for (const std::string& text : cases) EXPECT_THROW(parse_far_field(text), InputError) << text.substr(0, 40);
}

TEST(FarFieldFile, FarFieldOnOtherRuleIsSynthesized) {
  const FarFieldFile f = ball_file(true);
  const auto rule = harmonics::make_rule(20);
  const auto a = far_field_on(f, rule);
  const auto b = harmonics::synthesize(f.modes, rule);
  ASSERT_EQ(a.values.size(), b.values.size());
  EXPECT_EQ(far_field_on(f, f.samples->rule).values, f.samples->values);
}

TEST(ReconFile, RoundTripAndSortOrder) {
  recon::ReconResult r;
  r.accepted = {{Vec3(0, 0, 2), 2.5}, {Vec3(0, 0, 2), 3.0}, {Vec3(2, 0, 0), 2.2}};
  r.accepted_slope = {0.01, 0.0, -0.02};
  r.accepted_center = {0, 0, 3};
  r.occupancy = recon::voxelize({{Vec3(0, 0, 2), 2.5}, {Vec3(2, 0, 0), 2.2}}, 2.0, 17);
  const ReconFile f = export_result(r, "{\"R\":2}");
  EXPECT_EQ(f.config_hash, fnv1a_hex("{\"R\":2}"));
  const std::string text = to_json(f);
  const ReconFile back = parse_recon(text);
  EXPECT_EQ(back.voxels.data, r.occupancy.data);
  EXPECT_EQ(back.accepted.size(), 3u);
  EXPECT_EQ(to_json(back), text);

  std::string unsorted = text;
  const auto pos = unsorted.find("\"center\": 3");
  ASSERT_NE(pos, std::string::npos);
  unsorted.replace(pos, 11, "\"center\": 0");
  EXPECT_THROW(parse_recon(unsorted), InputError);
}

TEST(AtomicWrite, ReplacesAndLeavesNoTemporary) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "polyscat_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(fs::exists(path + ".tmp"));
  EXPECT_THROW(write_atomic((dir / "missing" / "x.json").string(), "x"), InputError);
  EXPECT_THROW(read_file((dir / "nope.json").string()), InputError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace polyscat::io
