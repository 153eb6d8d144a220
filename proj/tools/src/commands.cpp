#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyscat/errors.hpp"
#include "polyscat/forward.hpp"
#include "polyscat/io.hpp"
#include "polyscat/mie.hpp"
#include "polyscat/recon.hpp"
#include "polyscat/verify.hpp"

namespace polyscat::cli {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Vec3 vec3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw InputError(std::string(what) + " needs 3 values");
  return {v[0], v[1], v[2]};
}

Vec3 unit(const std::vector<double>& v, const char* what) {
  const Vec3 d = vec3(v, what);
  if (std::abs(d.norm() - 1.0) > 1e-9) throw InputError(std::string(what) + " must be a unit vector");
  return d.normalized();
}

struct PolicyArgs {
  int n_max = 40;
  double tau = 0.1;
  int window = 8;
  double noise_delta = 0.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::string kind = "pec";
  double test_lambda = 1.0;
  int workers = 0;

  void add_to(CLI::App* app) {
    app->add_option("--n-max", n_max, "Largest indicator order")->capture_default_str();
    app->add_option("--tau", tau, "Growth threshold on the log-partial slope")->capture_default_str();
    app->add_option("--window", window, "Trailing window for the slope fit")->capture_default_str();
    app->add_option("--noise-delta", noise_delta, "Assumed relative data noise (truncation cut-off)")
        ->capture_default_str();
    app->add_option("--noise", noise, "Add seeded multiplicative noise of this level to the data")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "Noise seed")->capture_default_str();
    app->add_option("--kind", kind, "Test-ball kind")->check(CLI::IsMember({"pec", "impedance"}))->capture_default_str();
    app->add_option("--test-lambda", test_lambda, "Impedance of impedance test balls")->capture_default_str();
    app->add_option("--workers", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  }

  recon::ReconOptions options() const {
    recon::ReconOptions o;
    o.kind = kind == "pec" ? mie::BallKind::PEC : mie::BallKind::Impedance;
    o.lambda = test_lambda;
    o.policy.N_max = n_max;
    o.policy.growth_threshold = tau;
    o.policy.window = window;
    o.noise_delta = std::max(noise_delta, noise);
    o.workers = workers;
    o.policy.validate();
    return o;
  }

  nlohmann::ordered_json json() const {
    return {{"n_max", n_max}, {"tau", tau}, {"window", window}, {"noise_delta", noise_delta}, {"noise", noise},
            {"seed", seed},   {"kind", kind}, {"test_lambda", test_lambda}};
  }
};

// E^inf on a rule fine enough for order n_max around centers at distance r;
// stored samples are used when their rule suffices.
harmonics::TangentialField data_for(const io::FarFieldFile& f, int n_max, double r, const PolicyArgs& p) {
  const int n_theta = harmonics::required_n_theta(n_max, f.k, r);
  harmonics::TangentialField w;
  if (f.samples && f.samples->rule->n_theta() >= n_theta && f.samples->rule->n_phi() >= 2 * n_theta)
    w = *f.samples;
  else
    w = harmonics::synthesize(f.modes, harmonics::make_rule(n_theta));
  if (p.noise > 0.0) w = recon::add_noise(w, p.noise, p.seed);
  return w;
}

// ---------------------------------------------------------------- forward

struct ForwardArgs {
  std::string mesh;
  std::vector<double> ball;
  double k = 1.0, lambda = 1.0;
  bool pec = false;
  std::string incident = "plane";
  std::vector<double> d{0.0, 0.0, 1.0}, p{1.0, 0.0, 0.0}, y;
  std::string normalization = "section5";
  int order = 0;
  bool samples = false;
  std::string out;
  forward::MFSConfig mfs;
  std::string normals = "face";
};

int cmd_forward(const ForwardArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.k > 0.0) || !(a.lambda > 0.0)) throw InputError("k and lambda must be positive");
  io::FarFieldFile file;
  file.k = a.k;
  file.incident.type = a.incident == "plane"    ? io::IncidentType::Plane
                       : a.incident == "dipole" ? io::IncidentType::Dipole
                                                : io::IncidentType::Herglotz;
  file.incident.normalization = a.normalization == "section1" ? io::Normalization::Section1 : io::Normalization::Section5;
  if (file.incident.type == io::IncidentType::Herglotz)
    throw InputError("herglotz incidence needs a kernel and is not available from the command line");
  file.incident.p = vec3(a.p, "--p");
  if (file.incident.type == io::IncidentType::Plane) file.incident.d = unit(a.d, "--d");
  if (file.incident.type == io::IncidentType::Dipole) {
    if (!a.mesh.empty()) file.incident.y = vec3(a.y, "--y");
    else throw InputError("dipole incidence is only available with --mesh");
  }
  const fields::PlaneWaveParams pw{file.incident.d, file.incident.p};
  const bool section1 = file.incident.normalization == io::Normalization::Section1;
  if (section1 && file.incident.type == io::IncidentType::Plane && std::abs(pw.p.dot(pw.d)) > 1e-12)
    throw InvalidPolarization("section1 plane waves need p orthogonal to d");

  if (!a.ball.empty()) {
    if (a.ball.size() != 4) throw InputError("--ball takes a cx cy cz");
    const mie::TestBall ball{Vec3(a.ball[1], a.ball[2], a.ball[3]), a.ball[0]};
    if (!(ball.h > 0.0)) throw InputError("ball radius must be positive");
    const int N = a.order > 0 ? a.order : mie::forward_order(a.k * ball.h);
    const auto spectrum = a.pec ? mie::pec_ball_spectrum(a.k, ball.h, N)
                                : mie::impedance_ball_spectrum(a.k, ball.h, a.lambda, N);
    file.modes = mie::far_field_coeffs(ball, spectrum, pw);
    if (section1) {
      const Complex s = 1.0 / (kI * a.k);
      for (auto& c : file.modes.cU) c *= s;
      for (auto& c : file.modes.cV) c *= s;
    }
    if (a.samples)
      file.samples = harmonics::synthesize(file.modes, harmonics::make_rule(harmonics::required_n_theta(N, a.k, ball.z.norm())));
    err << "forward: " << (a.pec ? "PEC" : "impedance") << " ball, series order " << N << "\n";
  } else {
    if (a.pec) throw InputError("--pec applies to --ball only; meshes carry the impedance condition");
    const forward::Polyhedron poly = forward::load_off(a.mesh);
    fields::FieldFn inc;
    if (file.incident.type == io::IncidentType::Plane) {
      inc = section1 ? fields::plane_wave(pw, a.k) : fields::section5_plane_wave(pw, a.k);
    } else {
      if (!(poly.plane_distance(file.incident.y) > 0.0)) throw InputError("dipole position must lie outside the mesh");
      inc = fields::magnetic_dipole(file.incident.y, file.incident.p, a.k);
    }
    forward::MFSConfig cfg = a.mfs;
    cfg.normals = a.normals == "interpolated" ? forward::NormalMode::Interpolated : forward::NormalMode::Face;
    const fields::WaveParams wp{a.k, a.lambda};
    const auto sol = forward::mfs_solve(poly, wp, inc, cfg);
    const Vec3 c = poly.centroid();
    const int N = a.order > 0 ? a.order : mie::forward_order(0.5 * a.k * poly.diameter());
    const auto rule = harmonics::make_rule(harmonics::required_n_theta(N, a.k, c.norm()));
    const auto ff = forward::mfs_farfield(sol, rule);
    file.modes = harmonics::analyze(ff, c, a.k, N);
    if (a.samples) file.samples = ff;
    err << "forward: MFS with " << cfg.n_sources << " sources, collocation residual "
        << sol.collocation_residual << ", held-out residual "
        << forward::held_out_residual(sol, poly, wp, inc, 400) << ", tikhonov " << sol.tikhonov << ", order " << N
        << "\n";
  }
  io::save_far_field(a.out, file);
  out << "wrote " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- spectra

struct SpectraArgs {
  double k = 1.0, h = 1.0, lambda = 1.0;
  int N = 10;
  std::string kind = "pec";
};

int cmd_spectra(const SpectraArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.k > 0.0) || !(a.h > 0.0)) throw InputError("k and h must be positive");
  if (a.N < 0) throw InputError("N must be >= 0");
  out << "n,re_u,im_u,re_v,im_v\n";
  if (a.N == 0) return kOk;
  mie::BallSpectrum s;
  if (a.kind == "pec") {
    const auto guard = mie::eigenvalue_guard(a.k, a.h, a.N);
    for (int n : guard.flagged)
      err << "warning: kh = " << num(a.k * a.h) << " is within the guard tolerance of an interior eigenvalue (order "
          << n << "); u_n or v_n is unreliable\n";
    s = mie::pec_ball_spectrum(a.k, a.h, a.N, false);
  } else {
    s = mie::impedance_ball_spectrum(a.k, a.h, a.lambda, a.N);
  }
  for (int n = 1; n <= a.N; ++n)
    out << n << "," << num(s.u(n).real()) << "," << num(s.u(n).imag()) << "," << num(s.v(n).real()) << ","
        << num(s.v(n).imag()) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- indicate

struct IndicateArgs {
  std::string ff;
  std::vector<double> z;
  double h_min = 0.0, h_max = 0.0;
  int h_count = 64;
  PolicyArgs policy;
};

int cmd_indicate(const IndicateArgs& a, std::ostream& out, std::ostream&) {
  const Vec3 z = vec3(a.z, "--z");
  const auto opts = a.policy.options();
  if (a.h_count < 1) throw InputError("--h-count must be >= 1");
  const double h_max = a.h_max > 0.0 ? a.h_max : 2.0 * z.norm();
  if (!(h_max > 0.0)) throw InputError("--h-max is required when z = 0");
  const double h_min = a.h_min > 0.0 ? a.h_min : h_max / a.h_count;
  if (!(h_min <= h_max)) throw InputError("--h-min must not exceed --h-max");
  const io::FarFieldFile f = io::load_far_field(a.ff);

  recon::SamplingGrid grid;
  grid.R = z.norm() > 0.0 ? z.norm() : h_max;
  grid.centers = {z};
  for (int i = 0; i < a.h_count; ++i)
    grid.radii.push_back(a.h_count == 1 ? h_min : h_min + (h_max - h_min) * i / (a.h_count - 1));
  recon::ReconOptions ro = opts;
  ro.voxels = 1;
  ro.workers = 1;
  const auto res = recon::reconstruct(data_for(f, opts.policy.N_max, z.norm(), a.policy), f.k, grid, ro);
  out << "h,order,I_N,slope,raw,classification\n";
  for (const auto& p : res.pairs)
    out << num(grid.radii[p.radius]) << "," << p.order << "," << num(p.last_partial) << "," << num(p.slope) << ","
        << indicator::to_string(p.raw) << "," << indicator::to_string(p.cleaned) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- reconstruct

struct ReconstructArgs {
  std::string ff, out;
  double R = 0.0;
  int Nz = 64, Nh = 64, voxels = 128;
  PolicyArgs policy;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.R > 0.0)) throw InputError("R must be positive");
  if (a.voxels < 1) throw InputError("--voxels must be >= 1");
  auto opts = a.policy.options();
  opts.voxels = a.voxels;
  const auto grid = recon::make_grid(a.R, a.Nz, a.Nh);
  const std::string text = io::read_file(a.ff);
  const io::FarFieldFile f = io::parse_far_field(text);
  const auto w = data_for(f, opts.policy.N_max, a.R, a.policy);

  int last_tenth = -1;
  opts.progress = [&](int done, int total) {
    const int tenth = 10 * done / total;
    if (tenth != last_tenth) {
      err << "reconstruct: " << done << "/" << total << " centers\n";
      last_tenth = tenth;
    }
  };
  const auto res = recon::reconstruct(w, f.k, grid, opts);
  for (const auto& line : res.log) err << "reconstruct: " << line << "\n";

  nlohmann::ordered_json config{{"data_hash", io::fnv1a_hex(text)}, {"R", a.R},       {"N_z", a.Nz},
                                {"N_h", a.Nh},                      {"voxels", a.voxels}, {"policy", a.policy.json()}};
  const io::ReconFile file = io::export_result(res, config.dump());
  io::save_recon(a.out, file);
  out << "accepted " << file.accepted.size() << " of " << res.pairs.size() << " balls, occupied voxels "
      << res.occupancy.count() << "; wrote " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- verify-reflection

struct VerifyArgs {
  double k = 1.0, lambda = 2.0;
  bool lambda_equals_k = false, dirichlet = false;
  int fields = 20, lattice = 10, green_points = 100;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
  const double k = a.k, lambda = a.lambda_equals_k ? a.k : a.lambda;
  if (!(k > 0.0) || !(lambda > 0.0)) throw InputError("k and lambda must be positive");
  bool ok = true;
  auto line = [&](const std::string& name, double value, double tol) {
    const bool pass = value < tol;
    ok = ok && pass;
    out << name << " " << num(value) << " (tol " << num(tol) << ") " << (pass ? "ok" : "FAILED") << "\n";
  };
  const auto normals = verify::normals_check(k, lambda);
  out << "admissible normals: " << normals.normals.size() << "\n";
  line("admissible_residual", normals.max_residual, 1e-12);

  verify::OracleSuiteOptions so;
  so.fields = a.fields;
  so.lattice = a.lattice;
  so.seed = a.seed;
  so.k = k;
  so.lambda = lambda;
  const auto r = verify::reflection_oracle_suite(so);
  out << "oracle fields " << r.fields << ", lattice points " << r.points << "\n";
  line("extension_error", r.max_error, 1e-8);
  line("value_jump", r.max_value_jump, 1e-6);
  line("normal_derivative_jump", r.max_normal_jump, 1e-6);
  line("helmholtz_residual_over_floor", r.helmholtz / std::max(r.helmholtz_floor, 1e-300), 10.0);
  line("divergence_residual_over_floor", r.divergence / std::max(r.divergence_floor, 1e-300), 10.0);

  const auto g = verify::green_check(k, lambda, a.green_points, a.seed);
  line("green_boundary_condition", g.max_bc, 1e-6);
  out << "green_helmholtz_residual " << num(g.helmholtz) << " (free-space stencil floor "
      << num(g.free_space_helmholtz) << "; diagnostic)\n";

  if (a.dirichlet) {
    const auto s = verify::dirichlet_limit(k, {1e2, 1e3, 1e4, 1e5});
    for (std::size_t i = 0; i < s.lambdas.size(); ++i)
      out << "dirichlet lambda " << num(s.lambdas[i]) << " error " << num(s.errors[i]) << "\n";
    out << "dirichlet_slope " << num(s.slope) << "\n";
    line("dirichlet_slope_deviation", std::abs(s.slope + 1.0), 0.1);
  }
  return ok ? kOk : kNumericalFailure;
}

}  // namespace

int exit_code_for(const std::string& kind) {
  static const char* const input[] = {"InputError",  "DomainError",  "NonConvexInput", "InvalidPolarization",
                                      "DegreeTooLow", "RuleMismatch", "EvalAtSource",   "EvalInsideBall",
                                      "OrderCapExceeded"};
  for (const char* k : input)
    if (kind == k) return kInputError;
  if (kind == "SingularParameterCombination" || kind == "InteriorEigenvalueNear") return kSingularConfiguration;
  return kNumericalFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Far-field imaging of convex impedance scatterers with test-ball indicators"};
  app.name("polyscat");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::version()));

  ForwardArgs fa;
  auto* fwd = app.add_subcommand("forward", "Synthesize far-field data (MFS for a mesh, Mie for a ball)");
  auto* mesh_opt = fwd->add_option("--mesh", fa.mesh, "OFF mesh of a convex polyhedron")->check(CLI::ExistingFile);
  auto* ball_opt = fwd->add_option("--ball", fa.ball, "Ball radius and center: a cx cy cz")->expected(4);
  mesh_opt->excludes(ball_opt);
  fwd->add_option("--k", fa.k, "Wavenumber")->capture_default_str();
  fwd->add_option("--lambda", fa.lambda, "Impedance of the scatterer")->capture_default_str();
  fwd->add_flag("--pec", fa.pec, "Perfectly conducting ball instead of impedance");
  fwd->add_option("--incident", fa.incident)->check(CLI::IsMember({"plane", "dipole", "herglotz"}))->capture_default_str();
  fwd->add_option("--d", fa.d, "Plane-wave direction")->expected(3);
  fwd->add_option("--p", fa.p, "Polarization / dipole moment")->expected(3);
  fwd->add_option("--y", fa.y, "Dipole position")->expected(3);
  fwd->add_option("--normalization", fa.normalization)
      ->check(CLI::IsMember({"section1", "section5"}))
      ->capture_default_str();
  fwd->add_option("--order", fa.order, "Modes written (default from the size parameter)");
  fwd->add_flag("--samples", fa.samples, "Also write sampled values");
  fwd->add_option("--sources", fa.mfs.n_sources)->capture_default_str();
  fwd->add_option("--collocation", fa.mfs.n_collocation)->capture_default_str();
  fwd->add_option("--shrink", fa.mfs.source_shrink)->capture_default_str();
  fwd->add_option("--tikhonov", fa.mfs.tikhonov, "Relative Tikhonov parameter (negative: L-curve)")
      ->capture_default_str();
  fwd->add_option("--max-residual", fa.mfs.max_residual)->capture_default_str();
  fwd->add_option("--normals", fa.normals)->check(CLI::IsMember({"face", "interpolated"}))->capture_default_str();
  fwd->add_option("--edge-weight", fa.mfs.edge_weight)->capture_default_str();
  fwd->add_option("--mfs-seed", fa.mfs.seed)->capture_default_str();
  fwd->add_option("--out", fa.out, "Output far-field file")->required();

  SpectraArgs sa;
  auto* spec = app.add_subcommand("spectra", "Print test-ball far-field-operator eigenvalues u_n, v_n as CSV");
  spec->add_option("--k", sa.k)->capture_default_str();
  spec->set_help_flag("--help", "Print this help message and exit");  // -h is the radius
  spec->add_option("--h", sa.h, "Ball radius")->capture_default_str();
  spec->add_option("--N", sa.N)->capture_default_str();
  spec->add_option("--kind", sa.kind)->check(CLI::IsMember({"pec", "impedance"}))->capture_default_str();
  spec->add_option("--lambda", sa.lambda, "Impedance (impedance kind)")->capture_default_str();

  IndicateArgs ia;
  auto* ind = app.add_subcommand("indicate", "Indicator scan over h for a single center");
  ind->add_option("--ff", ia.ff, "Far-field file")->required();
  ind->add_option("--z", ia.z, "Center")->expected(3)->required();
  ind->add_option("--h-min", ia.h_min);
  ind->add_option("--h-max", ia.h_max);
  ind->add_option("--h-count", ia.h_count)->capture_default_str();
  ia.policy.add_to(ind);

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Full sweep over centers and radii, voxelized intersection");
  rec->add_option("--ff", ra.ff, "Far-field file")->required();
  rec->add_option("--R", ra.R, "Radius of the center sphere")->required();
  rec->add_option("--Nz", ra.Nz)->capture_default_str();
  rec->add_option("--Nh", ra.Nh)->capture_default_str();
  rec->add_option("--voxels", ra.voxels)->capture_default_str();
  rec->add_option("--out", ra.out, "Output reconstruction file")->required();
  ra.policy.add_to(rec);

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify-reflection", "Oracle checks of the reflection operator");
  ver->add_option("--k", va.k)->capture_default_str();
  ver->add_option("--lambda", va.lambda)->capture_default_str();
  ver->add_flag("--lambda-equals-k", va.lambda_equals_k, "Use lambda = k (singular)");
  ver->add_flag("--dirichlet-limit", va.dirichlet, "Also fit the large-lambda slope");
  ver->add_option("--fields", va.fields)->capture_default_str();
  ver->add_option("--lattice", va.lattice)->capture_default_str();
  ver->add_option("--green-points", va.green_points)->capture_default_str();
  ver->add_option("--seed", va.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  try {
    if (*fwd) {
      if (fa.mesh.empty() && fa.ball.empty()) throw InputError("one of --mesh or --ball is required");
      return cmd_forward(fa, out, err);
    }
    if (*spec) return cmd_spectra(sa, out, err);
    if (*ind) return cmd_indicate(ia, out, err);
    if (*rec) return cmd_reconstruct(ra, out, err);
    if (*ver) return cmd_verify(va, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("polyscat");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace polyscat::cli
