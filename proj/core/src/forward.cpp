#include "polyscat/forward.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "polyscat/errors.hpp"

namespace polyscat::forward {
namespace {

Vec3 newell_normal(const std::vector<Vec3>& v, const std::vector<int>& f) {
  Vec3 n = Vec3::Zero();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3& a = v[f[i]];
    const Vec3& b = v[f[(i + 1) % f.size()]];
    n += Vec3((a.y() - b.y()) * (a.z() + b.z()), (a.z() - b.z()) * (a.x() + b.x()),
              (a.x() - b.x()) * (a.y() + b.y()));
  }
  return n;
}

// nu x curl E + i lambda nu x (nu x E), projected on the tangents t1, t2.
Eigen::Vector2cd bc_rows(const CVec3& E, const CVec3& curlE, const Vec3& nu, const Vec3& t1, const Vec3& t2,
                         double lambda) {
  const CVec3 n = nu.cast<Complex>();
  const CVec3 b = cross(n, curlE) + kI * lambda * cross(n, cross(n, E));
  return {t1.cast<Complex>().dot(b), t2.cast<Complex>().dot(b)};
}

struct DipoleField {
  CVec3 E, curlE;
};

DipoleField dipole(const Vec3& x, const Vec3& y, const Vec3& a, double k) {
  const Vec3 r = x - y;
  const double R = r.norm();
  if (R < fields::source_guard(k)) throw EvalAtSource("evaluation point on an MFS source");
  const Vec3 rh = r / R;
  const auto d = fields::phi_derivatives(R, k);
  const double ra = rh.dot(a);
  // grad grad Phi a = f2 (r.a) r + (f1/R)(a - (r.a) r).
  const CVec3 hess_a = d.f2 * ra * rh.cast<Complex>() + (d.f1 / R) * (a - ra * rh).cast<Complex>();
  DipoleField out;
  out.E = d.f * a.cast<Complex>() + hess_a / (k * k);
  out.curlE = d.f1 * cross(rh, a).cast<Complex>();
  return out;
}

std::pair<Vec3, Vec3> tangents(const Vec3& nu) {
  const Vec3 t1 = nu.unitOrthogonal();
  return {t1, nu.cross(t1)};
}

template <typename Fn>
void parallel_rows(int n, Fn&& fn) {
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, n / 64));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += workers) fn(i);
    });
  }
  for (int i = 0; i < n; i += workers) fn(i);
  for (auto& th : pool) th.join();
}

}  // namespace

Polyhedron::Polyhedron(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  if (vertices_.size() < 4 || faces_.size() < 4) throw InputError("polyhedron needs at least 4 vertices and faces");
  for (const auto& f : faces_) {
    if (f.size() < 3) throw InputError("face with fewer than 3 vertices");
    for (int i : f) {
      if (i < 0 || i >= static_cast<int>(vertices_.size())) throw InputError("face index out of range");
    }
  }
  for (const auto& v : vertices_) {
    centroid_ += v;
    if (!v.allFinite()) throw InputError("non-finite vertex");
  }
  centroid_ /= static_cast<double>(vertices_.size());
  for (const auto& a : vertices_) diameter_ = std::max(diameter_, 2.0 * (a - centroid_).norm());
  // Watertight with consistent orientation: every directed edge once, its
  // reverse once.
  std::map<std::pair<int, int>, int> edges;
  for (const auto& f : faces_) {
    for (std::size_t i = 0; i < f.size(); ++i) ++edges[{f[i], f[(i + 1) % f.size()]}];
  }
  for (const auto& [e, count] : edges) {
    const auto rev = edges.find({e.second, e.first});
    if (count != 1 || rev == edges.end() || rev->second != 1) {
      throw InputError("mesh is not a closed, consistently oriented surface");
    }
  }
  int inward = 0;
  for (const auto& f : faces_) {
    Vec3 fc = Vec3::Zero();
    for (int i : f) fc += vertices_[i];
    fc /= static_cast<double>(f.size());
    if (newell_normal(vertices_, f).dot(fc - centroid_) < 0.0) ++inward;
  }
  if (inward == static_cast<int>(faces_.size())) {
    for (auto& f : faces_) std::reverse(f.begin(), f.end());
  } else if (inward != 0) {
    throw NonConvexInput("faces point to both sides of the centroid");
  }
  const double tol = 1e-10 * diameter_;
  const bool full_check = double(vertices_.size()) * double(faces_.size()) <= 2e7;
  std::map<std::pair<int, int>, int> edge_face;
  if (!full_check) {
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
      const auto& f = faces_[fi];
      for (std::size_t i = 0; i < f.size(); ++i) edge_face[{f[i], f[(i + 1) % f.size()]}] = static_cast<int>(fi);
    }
  }
  for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
    const auto& f = faces_[fi];
    const Vec3 n = newell_normal(vertices_, f);
    if (!(n.norm() > 0.0)) throw InputError("degenerate face");
    normals_.push_back(n.normalized());
    const Vec3& p0 = vertices_[f[0]];
    if (full_check) {
      for (const auto& v : vertices_) {
        if (normals_.back().dot(v - p0) > tol) throw NonConvexInput("vertex outside a face plane");
      }
    } else {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const int other = edge_face.at({f[(i + 1) % f.size()], f[i]});
        for (int vi : faces_[other]) {
          if (normals_.back().dot(vertices_[vi] - p0) > tol) throw NonConvexInput("vertex outside a face plane");
        }
      }
    }
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      const double a = 0.5 * (vertices_[f[i]] - p0).cross(vertices_[f[i + 1]] - p0).norm();
      total_area_ += a;
      tri_area_cdf_.push_back(total_area_);
      tris_.push_back({static_cast<int>(fi), f[0], f[i], f[i + 1]});
    }
  }
  vertex_normals_.assign(vertices_.size(), Vec3::Zero());
  for (const auto& t : tris_) {
    const Vec3 n = (vertices_[t[2]] - vertices_[t[1]]).cross(vertices_[t[3]] - vertices_[t[1]]);
    for (int a = 1; a < 4; ++a) vertex_normals_[t[a]] += n;
  }
  for (auto& n : vertex_normals_) n.normalize();
}

std::vector<SurfacePoint> Polyhedron::sample(int n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SurfacePoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = u(rng) * total_area_;
    const auto it = std::upper_bound(tri_area_cdf_.begin(), tri_area_cdf_.end(), a);
    const auto& t = tris_[std::min<std::size_t>(it - tri_area_cdf_.begin(), tris_.size() - 1)];
    const double r1 = std::sqrt(u(rng)), r2 = u(rng);
    const double w0 = 1.0 - r1, w1 = r1 * (1.0 - r2), w2 = r1 * r2;
    const Vec3 x = w0 * vertices_[t[1]] + w1 * vertices_[t[2]] + w2 * vertices_[t[3]];
    const Vec3 sn =
        (w0 * vertex_normals_[t[1]] + w1 * vertex_normals_[t[2]] + w2 * vertex_normals_[t[3]]).normalized();
    out.push_back({x, normals_[t[0]], sn, t[0], edge_distance(t[0], x)});
  }
  return out;
}

double Polyhedron::edge_distance(int face, const Vec3& x) const {
  const auto& f = faces_[face];
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3& a = vertices_[f[i]];
    const Vec3 e = vertices_[f[(i + 1) % f.size()]] - a;
    const double t = std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    d = std::min(d, (x - a - t * e).norm());
  }
  return d;
}

SurfacePoint Polyhedron::ray_hit(const Vec3& dir) const {
  double best = std::numeric_limits<double>::infinity();
  int face = -1;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const double den = normals_[f].dot(dir);
    if (den <= 0.0) continue;
    const double t = normals_[f].dot(vertices_[faces_[f][0]] - centroid_) / den;
    if (t < best) {
      best = t;
      face = static_cast<int>(f);
    }
  }
  if (face < 0) throw DomainError("ray does not leave the polyhedron");
  const Vec3 x = centroid_ + best * dir;
  return {x, normals_[face], normals_[face], face, edge_distance(face, x)};
}

SphereBoundary::SphereBoundary(const Vec3& center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
}

std::vector<SurfacePoint> SphereBoundary::sample(int n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<SurfacePoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vec3 d(g(rng), g(rng), g(rng));
    d.normalize();
    out.push_back({center_ + radius_ * d, d, d, 0, std::numeric_limits<double>::infinity()});
  }
  return out;
}

double Polyhedron::plane_distance(const Vec3& x) const {
  double d = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < faces_.size(); ++f) d = std::max(d, normals_[f].dot(x - vertices_[faces_[f][0]]));
  return d;
}

Polyhedron parse_off(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw InputError("OFF: unexpected end of file");
  };
  std::string head = next_line();
  head.erase(head.find_last_not_of(" \t\r") + 1);
  head.erase(0, head.find_first_not_of(" \t"));
  if (head != "OFF") throw InputError("OFF: first line must be 'OFF'");
  long nv = -1, nf = -1, ne = -1;
  {
    std::istringstream s(next_line());
    if (!(s >> nv >> nf >> ne)) throw InputError("OFF: bad counts line");
    if (nv < 4 || nf < 4) throw InputError("OFF: a closed polyhedron needs at least 4 vertices and 4 faces");
  }
  std::vector<Vec3> v(nv);
  for (long i = 0; i < nv; ++i) {
    std::istringstream s(next_line());
    if (!(s >> v[i].x() >> v[i].y() >> v[i].z())) throw InputError("OFF: bad vertex line " + std::to_string(i));
  }
  std::vector<std::vector<int>> f(nf);
  for (long i = 0; i < nf; ++i) {
    std::istringstream s(next_line());
    int count = 0;
    if (!(s >> count) || count < 3) throw InputError("OFF: bad face line " + std::to_string(i));
    f[i].resize(count);
    for (int j = 0; j < count; ++j) {
      if (!(s >> f[i][j])) throw InputError("OFF: short face line " + std::to_string(i));
    }
  }
  return Polyhedron(std::move(v), std::move(f));
}

Polyhedron load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file " + path);
  return parse_off(in);
}

void write_off(std::ostream& out, const Polyhedron& poly) {
  out << "OFF\n" << poly.vertices().size() << ' ' << poly.faces().size() << " 0\n";
  out.precision(17);
  for (const auto& v : poly.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : poly.faces()) {
    out << f.size();
    for (int i : f) out << ' ' << i;
    out << '\n';
  }
}

Polyhedron icosphere(double radius, int subdivisions, const Vec3& center) {
  if (!(radius > 0.0) || subdivisions < 0 || subdivisions > 7) throw DomainError("icosphere: bad arguments");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      return mid[key] = static_cast<int>(v.size()) - 1;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f.swap(next);
  }
  for (auto& p : v) p = center + radius * p;
  std::vector<std::vector<int>> faces;
  faces.reserve(f.size());
  for (const auto& tri : f) faces.push_back({tri[0], tri[1], tri[2]});
  return Polyhedron(std::move(v), std::move(faces));
}

Polyhedron cube(double half, const Vec3& center) {
  if (!(half > 0.0)) throw DomainError("cube: half width must be positive");
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) {
    v.push_back(center + half * Vec3((i & 1) ? 1 : -1, (i & 2) ? 1 : -1, (i & 4) ? 1 : -1));
  }
  std::vector<std::vector<int>> f = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                     {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  return Polyhedron(std::move(v), std::move(f));
}

void MFSConfig::validate() const {
  if (n_sources < 1) throw DomainError("n_sources must be positive");
  if (n_collocation < 2 * n_sources) throw DomainError("n_collocation must be >= 2 n_sources");
  if (!(source_shrink >= 0.5 && source_shrink <= 0.95)) throw DomainError("source_shrink must lie in [0.5, 0.95]");
  if (!(max_residual > 0.0)) throw DomainError("max_residual must be positive");
  if (orientations != 2 && orientations != 3) throw DomainError("orientations must be 2 or 3");
  if (!(edge_weight >= 0.0) || !(edge_scale > 0.0)) throw DomainError("edge weighting must be non-negative");
}

MFSSolution mfs_solve(const Boundary& boundary, const fields::WaveParams& wp, const fields::FieldFn& incident,
                      const MFSConfig& cfg) {
  wp.validate();
  cfg.validate();
  const double k = wp.k, lambda = wp.lambda;
  MFSSolution sol;
  sol.k = k;
  sol.lambda = lambda;
  // Sources: Fibonacci directions from the centroid, hit points shrunk inward.
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int s = 0; s < cfg.n_sources; ++s) {
    const double zc = 1.0 - (2.0 * s + 1.0) / cfg.n_sources;
    const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const Vec3 dir(rho * std::cos(golden * s), rho * std::sin(golden * s), zc);
    const auto hit = boundary.ray_hit(dir);
    const auto [t1, t2] = tangents(hit.normal);
    sol.sources.push_back(boundary.centroid() + cfg.source_shrink * (hit.x - boundary.centroid()));
    sol.directions.push_back(t1);
    sol.directions.push_back(t2);
    if (cfg.orientations == 3) sol.directions.push_back(hit.normal);
  }
  const auto pts = boundary.sample(cfg.n_collocation, cfg.seed);
  const int rows = 2 * cfg.n_collocation, cols = static_cast<int>(sol.directions.size());
  const int per = cfg.orientations;
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd b(rows);
  sol.normals = cfg.normals;
  sol.orientations = cfg.orientations;
  double size = 0.0;
  for (const auto& p : pts) size = std::max(size, (p.x - boundary.centroid()).norm());
  const double ell = cfg.edge_scale * size;
  parallel_rows(cfg.n_collocation, [&](int i) {
    const auto& p = pts[i];
    const Vec3& nu = cfg.normals == NormalMode::Face ? p.normal : p.smooth_normal;
    const auto [t1, t2] = tangents(nu);
    double w = 1.0;
    if (cfg.edge_weight > 0.0 && cfg.normals == NormalMode::Face && std::isfinite(p.edge_distance)) {
      w = std::pow(p.edge_distance / (p.edge_distance + ell), cfg.edge_weight);
    }
    const FieldValue inc = incident(p.x);
    b.segment<2>(2 * i) = -w * bc_rows(inc.E, kI * k * inc.H, nu, t1, t2, lambda);
    for (int c = 0; c < cols; ++c) {
      const auto f = dipole(p.x, sol.sources[c / per], sol.directions[c], k);
      A.block<2, 1>(2 * i, c) = w * bc_rows(f.E, f.curlE, nu, t1, t2, lambda);
    }
  });
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < cols; ++c) A.col(c) /= scale[c];

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  const Eigen::MatrixXcd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  const Eigen::VectorXcd qb = (qr.householderQ().adjoint() * b).eval();
  const Eigen::VectorXcd c = qb.head(cols);
  const double b_perp2 = std::max(0.0, b.squaredNorm() - c.squaredNorm());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sigma = svd.singularValues();
  const Eigen::VectorXcd uc = svd.matrixU().adjoint() * c;
  const double smax = sigma[0];
  sol.condition = sigma[cols - 1] > 0.0 ? smax / sigma[cols - 1] : std::numeric_limits<double>::infinity();

  auto solve_with = [&](double mu, double& res2, double& xnorm2) {
    Eigen::VectorXcd y(cols);
    res2 = b_perp2;
    xnorm2 = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double s = sigma[j];
      const double f = s * s + mu * mu > 0.0 ? s / (s * s + mu * mu) : 0.0;
      y[j] = f * uc[j];
      const double r = s * s + mu * mu > 0.0 ? mu * mu / (s * s + mu * mu) : 1.0;
      res2 += r * r * std::norm(uc[j]);
      xnorm2 += std::norm(y[j]);
    }
    return Eigen::VectorXcd(svd.matrixV() * y);
  };
  double t = cfg.tikhonov;
  if (t < 0.0) {
    // L-curve corner: largest Menger curvature of (log residual, log norm).
    std::vector<double> ts, lr, lx;
    for (int j = 0; j <= 16; ++j) {
      const double tj = std::pow(10.0, -14.0 + 0.5 * j);
      double r2, x2;
      solve_with(tj * smax, r2, x2);
      ts.push_back(tj);
      lr.push_back(0.5 * std::log(std::max(r2, 1e-300)));
      lx.push_back(0.5 * std::log(std::max(x2, 1e-300)));
    }
    double best = -std::numeric_limits<double>::infinity();
    t = ts.front();
    for (std::size_t j = 1; j + 1 < ts.size(); ++j) {
      const Eigen::Vector2d p0(lr[j - 1], lx[j - 1]), p1(lr[j], lx[j]), p2(lr[j + 1], lx[j + 1]);
      const double a = (p1 - p0).norm(), bb = (p2 - p1).norm(), cc = (p2 - p0).norm();
      if (a * bb * cc <= 0.0) continue;
      const Eigen::Vector2d u = p1 - p0, v = p2 - p1;
      // Positive for the convex corner of an L (turning toward smaller norm).
      const double curv = 2.0 * (u.x() * v.y() - u.y() * v.x()) / (a * bb * cc);
      if (curv > best) {
        best = curv;
        t = ts[j];
      }
    }
  }
  double r2, x2;
  const Eigen::VectorXcd x = solve_with(t * smax, r2, x2);
  sol.tikhonov = t;
  sol.coeffs = x.cwiseQuotient(scale.cast<Complex>());
  const double bn = b.norm();
  sol.collocation_residual = bn > 0.0 ? std::sqrt(r2) / bn : 0.0;
  if (!(sol.collocation_residual <= cfg.max_residual)) {
    std::ostringstream msg;
    msg << "MFS collocation residual " << sol.collocation_residual << " above " << cfg.max_residual;
    throw IllConditioned(msg.str());
  }
  return sol;
}

FieldValue mfs_scattered(const MFSSolution& sol, const Vec3& x) {
  FieldValue out;
  CVec3 curl = CVec3::Zero();
  for (std::size_t c = 0; c < sol.directions.size(); ++c) {
    const auto f = dipole(x, sol.sources[c / sol.orientations], sol.directions[c], sol.k);
    out.E += sol.coeffs[c] * f.E;
    curl += sol.coeffs[c] * f.curlE;
  }
  out.H = curl / (kI * sol.k);
  return out;
}

harmonics::TangentialField mfs_farfield(const MFSSolution& sol, const harmonics::QuadraturePtr& rule) {
  harmonics::TangentialField out{rule, std::vector<CVec3>(rule->size(), CVec3::Zero())};
  parallel_rows(static_cast<int>(rule->size()), [&](int i) {
    const Vec3& xh = rule->direction(i);
    CVec3 acc = CVec3::Zero();
    for (std::size_t c = 0; c < sol.directions.size(); ++c) {
      const Vec3& a = sol.directions[c];
      const Vec3 at = a - xh * xh.dot(a);
      acc += sol.coeffs[c] * std::polar(1.0, -sol.k * xh.dot(sol.sources[c / sol.orientations])) * at.cast<Complex>();
    }
    out.values[i] = acc / (4.0 * kPi);
  });
  return out;
}

double held_out_residual(const MFSSolution& sol, const Boundary& boundary, const fields::WaveParams& wp,
                         const fields::FieldFn& incident, int n_points, std::uint64_t seed) {
  if (n_points < 1) throw DomainError("n_points must be positive");
  const auto pts = boundary.sample(n_points, seed);
  double worst = 0.0, ref = 0.0;
  for (const auto& p : pts) {
    const Vec3& nu = sol.normals == NormalMode::Face ? p.normal : p.smooth_normal;
    const auto [t1, t2] = tangents(nu);
    const FieldValue inc = incident(p.x);
    const FieldValue sc = mfs_scattered(sol, p.x);
    const auto ri = bc_rows(inc.E, kI * wp.k * inc.H, nu, t1, t2, wp.lambda);
    const auto rt = bc_rows(inc.E + sc.E, kI * wp.k * (inc.H + sc.H), nu, t1, t2, wp.lambda);
    ref = std::max(ref, ri.norm());
    worst = std::max(worst, rt.norm());
  }
  return ref > 0.0 ? worst / ref : worst;
}

}  // namespace polyscat::forward
