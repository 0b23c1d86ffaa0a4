#include "abelheight/torsion3.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

namespace ah {

namespace {

using cd = std::complex<double>;

// First-order jet in three variables.
template <class T>
struct Jet {
  T v;
  std::array<T, 3> d;
};

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  return {a.v + b.v, {a.d[0] + b.d[0], a.d[1] + b.d[1], a.d[2] + b.d[2]}};
}
template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  return {a.v - b.v, {a.d[0] - b.d[0], a.d[1] - b.d[1], a.d[2] - b.d[2]}};
}
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.v * b.v,
          {a.d[0] * b.v + a.v * b.d[0], a.d[1] * b.v + a.v * b.d[1], a.d[2] * b.v + a.v * b.d[2]}};
}

cd half(const cd& x) { return x * 0.5; }
CBall half(const CBall& x) { return x.mul_2si(-1); }
template <class T>
Jet<T> half(const Jet<T>& a) {
  return {half(a.v), {half(a.d[0]), half(a.d[1]), half(a.d[2])}};
}

// h^2 - u^3 - t F = E1 x^2 + E2 x + E3 once the top three coefficients are solved for b.
template <class T, class Cst>
std::array<T, 3> torsion_system(const T& u0, const T& u1, const T& t, const std::array<T, 6>& a, Cst c) {
  T b2 = half(t * a[5] + c(3) * u1);
  T b1 = half(t * a[4] + c(3) * u1 * u1 + c(3) * u0 - b2 * b2);
  T b0 = half(t * a[3] + u1 * u1 * u1 + c(6) * u0 * u1 - c(2) * b1 * b2);
  T e1 = b1 * b1 + c(2) * b0 * b2 - c(3) * u0 * u0 - c(3) * u0 * u1 * u1 - t * a[2];
  T e2 = c(2) * b0 * b1 - c(3) * u0 * u0 * u1 - t * a[1];
  T e3 = b0 * b0 - u0 * u0 * u0 - t * a[0];
  return {e1, e2, e3};
}

template <class T>
using Vec3 = std::array<T, 3>;
template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

// ------------------------------------------------------------ double level

struct DSystem {
  std::array<cd, 6> a;

  void eval(const Vec3<cd>& z, Vec3<cd>& f, Mat3<cd>& J) const {
    using J3 = Jet<cd>;
    auto var = [](const cd& v, int i) {
      J3 j{v, {0.0, 0.0, 0.0}};
      j.d[i] = 1.0;
      return j;
    };
    auto cst = [](long n) { return J3{cd(double(n)), {0.0, 0.0, 0.0}}; };
    std::array<J3, 6> A;
    for (int i = 0; i < 6; ++i) A[i] = J3{a[i], {0.0, 0.0, 0.0}};
    auto r = torsion_system<J3>(var(z[0], 0), var(z[1], 1), var(z[2], 2), A, cst);
    for (int i = 0; i < 3; ++i) {
      f[i] = r[i].v;
      for (int j = 0; j < 3; ++j) J[i][j] = r[i].d[j];
    }
  }
};

template <class T, class Abs>
bool solve3(Mat3<T> A, Vec3<T> b, Vec3<T>& x, Abs mag) {
  int p[3] = {0, 1, 2};
  for (int c = 0; c < 3; ++c) {
    int best = c;
    for (int r = c + 1; r < 3; ++r)
      if (mag(A[p[r]][c]) > mag(A[p[best]][c])) best = r;
    std::swap(p[c], p[best]);
    if (mag(A[p[c]][c]) == 0) return false;
    for (int r = c + 1; r < 3; ++r) {
      T f = A[p[r]][c] / A[p[c]][c];
      for (int k = c; k < 3; ++k) A[p[r]][k] = A[p[r]][k] - f * A[p[c]][k];
      b[p[r]] = b[p[r]] - f * b[p[c]];
    }
  }
  for (int c = 2; c >= 0; --c) {
    T s = b[p[c]];
    for (int k = c + 1; k < 3; ++k) s = s - A[p[c]][k] * x[k];
    x[c] = s / A[p[c]][c];
  }
  return true;
}

double norm3(const Vec3<cd>& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

const int kDeg[3] = {4, 5, 6};

struct Tracker {
  DSystem sys;
  cd gamma;

  // H(z, s) = (1 - s) gamma G(z) + s E(z), G_i = z_i^{d_i} - 1
  void homotopy(const Vec3<cd>& z, double s, Vec3<cd>& H, Mat3<cd>& Hz, Vec3<cd>& Hs) const {
    Vec3<cd> f;
    Mat3<cd> J;
    sys.eval(z, f, J);
    for (int i = 0; i < 3; ++i) {
      cd zp = std::pow(z[i], kDeg[i] - 1);
      cd g = zp * z[i] - 1.0;
      cd dg = double(kDeg[i]) * zp;
      H[i] = (1 - s) * gamma * g + s * f[i];
      Hs[i] = f[i] - gamma * g;
      for (int j = 0; j < 3; ++j) Hz[i][j] = s * J[i][j];
      Hz[i][i] += (1 - s) * gamma * dg;
    }
  }

  bool tangent(const Vec3<cd>& z, double s, Vec3<cd>& dz) const {
    Vec3<cd> H, Hs;
    Mat3<cd> Hz;
    homotopy(z, s, H, Hz, Hs);
    for (auto& x : Hs) x = -x;
    return solve3(Hz, Hs, dz, [](const cd& c) { return std::abs(c); });
  }

  bool correct(Vec3<cd>& z, double s, int maxit, double tol) const {
    for (int it = 0; it < maxit; ++it) {
      Vec3<cd> H, Hs, dz;
      Mat3<cd> Hz;
      homotopy(z, s, H, Hz, Hs);
      if (!solve3(Hz, H, dz, [](const cd& c) { return std::abs(c); })) return false;
      for (int i = 0; i < 3; ++i) z[i] -= dz[i];
      if (norm3(dz) <= tol * (1 + norm3(z))) return true;
    }
    return false;
  }

  std::optional<Vec3<cd>> track(Vec3<cd> z) const {
    double s = 0, h = 0.02;
    while (s < 1) {
      h = std::min(h, 1 - s);
      Vec3<cd> k1, k2, k3, k4, w;
      auto add = [&](const Vec3<cd>& a, const Vec3<cd>& b, double c) {
        Vec3<cd> r;
        for (int i = 0; i < 3; ++i) r[i] = a[i] + c * b[i];
        return r;
      };
      bool ok = tangent(z, s, k1) && tangent(add(z, k1, h / 2), s + h / 2, k2) &&
                tangent(add(z, k2, h / 2), s + h / 2, k3) && tangent(add(z, k3, h), s + h, k4);
      if (ok) {
        for (int i = 0; i < 3; ++i) w[i] = z[i] + h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        ok = correct(w, s + h, 3, 1e-10);
      }
      if (ok) {
        s += h;
        z = w;
        h = std::min(h * 1.6, 0.05);
      } else {
        h /= 2;
        if (h < 1e-12) return std::nullopt;
      }
      if (norm3(z) > 1e8) return std::nullopt;
    }
    if (!correct(z, 1.0, 30, 1e-13)) return std::nullopt;
    return z;
  }
};

std::vector<Vec3<cd>> start_points() {
  std::vector<Vec3<cd>> out;
  const double tau = 2 * M_PI;
  for (int i = 0; i < kDeg[0]; ++i)
    for (int j = 0; j < kDeg[1]; ++j)
      for (int k = 0; k < kDeg[2]; ++k)
        out.push_back({std::polar(1.0, tau * i / kDeg[0]), std::polar(1.0, tau * j / kDeg[1]),
                       std::polar(1.0, tau * k / kDeg[2])});
  return out;
}

// ---------------------------------------------------------------- ball level

struct BSystem {
  std::array<CBall, 6> a;
  long prec;

  CBall cst(long n) const { return CBall::from_si(n, prec); }

  Vec3<CBall> eval(const Vec3<CBall>& z) const {
    return torsion_system<CBall>(z[0], z[1], z[2], a, [this](long n) { return cst(n); });
  }

  Mat3<CBall> jacobian(const Vec3<CBall>& z) const {
    using J3 = Jet<CBall>;
    CBall zero(prec), one = cst(1);
    auto var = [&](const CBall& v, int i) {
      J3 j{v, {zero, zero, zero}};
      j.d[i] = one;
      return j;
    };
    std::array<J3, 6> A;
    for (int i = 0; i < 6; ++i) A[i] = J3{a[i], {zero, zero, zero}};
    auto r = torsion_system<J3>(var(z[0], 0), var(z[1], 1), var(z[2], 2), A,
                                [&](long n) { return J3{cst(n), {zero, zero, zero}}; });
    Mat3<CBall> J;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) J[i][j] = r[i].d[j];
    return J;
  }
};

double cmag(const CBall& c) { return std::hypot(c.re.mid_d(), c.im.mid_d()); }

Vec3<CBall> strip(const Vec3<CBall>& z) { return {z[0].midpoint(), z[1].midpoint(), z[2].midpoint()}; }

CBall cball_of(const cd& z, long prec) {
  return CBall(Ball::from_double(z.real(), prec), Ball::from_double(z.imag(), prec));
}

// Newton on midpoints at the working precision.
bool refine(const BSystem& S, Vec3<CBall>& z) {
  double target = std::ldexp(1.0, -static_cast<int>(S.prec) + 8);
  for (int it = 0; it < 200; ++it) {
    auto f = strip(S.eval(z));
    Mat3<CBall> J = S.jacobian(z);
    for (auto& row : J)
      for (auto& x : row) x = x.midpoint();
    Vec3<CBall> dz{CBall(S.prec), CBall(S.prec), CBall(S.prec)};
    if (!solve3(J, f, dz, cmag)) return false;
    double step = 0, size = 1;
    for (int i = 0; i < 3; ++i) {
      z[i] = (z[i] - dz[i]).midpoint();
      step = std::max(step, cmag(dz[i]));
      size = std::max(size, cmag(z[i]));
    }
    if (step <= target * size) return true;
  }
  return false;
}

CBall widen(const CBall& c, double r) {
  CBall out = c.midpoint();
  out.re.add_error_d(r);
  out.im.add_error_d(r);
  return out;
}

// Krawczyk test on the box of radius r around z; returns an enclosure of the unique root.
std::optional<Vec3<CBall>> krawczyk(const BSystem& S, const Vec3<CBall>& z, double r, Vec3<CBall>& box) {
  for (int i = 0; i < 3; ++i) box[i] = widen(z[i], r);
  Vec3<CBall> f = S.eval(z);
  Mat3<CBall> Jx = S.jacobian(box);
  Mat3<CBall> Jm = S.jacobian(z);
  // Y: approximate inverse of the midpoint Jacobian
  Mat3<CBall> Y;
  for (auto& row : Jm)
    for (auto& x : row) x = x.midpoint();
  for (int c = 0; c < 3; ++c) {
    Vec3<CBall> e{CBall(S.prec), CBall(S.prec), CBall(S.prec)}, col{CBall(S.prec), CBall(S.prec), CBall(S.prec)};
    e[c] = S.cst(1);
    if (!solve3(Jm, e, col, cmag)) return std::nullopt;
    for (int i = 0; i < 3; ++i) Y[i][c] = col[i].midpoint();
  }
  Vec3<CBall> K;
  for (int i = 0; i < 3; ++i) {
    CBall acc = z[i];
    for (int k = 0; k < 3; ++k) acc = acc - Y[i][k] * f[k];
    for (int j = 0; j < 3; ++j) {
      CBall m = i == j ? S.cst(1) : CBall(S.prec);
      for (int k = 0; k < 3; ++k) m = m - Y[i][k] * Jx[k][j];
      acc = acc + m * (box[j] - z[j]);
    }
    K[i] = acc;
  }
  for (int i = 0; i < 3; ++i)
    if (!box[i].re.contains_interior(K[i].re) || !box[i].im.contains_interior(K[i].im)) return std::nullopt;
  return K;
}

bool boxes_overlap(const Vec3<CBall>& a, const Vec3<CBall>& b) {
  for (int i = 0; i < 3; ++i)
    if (!a[i].overlaps(b[i])) return false;
  return true;
}

CKummerPoint kummer_from_root(const Curve& C, const Vec3<CBall>& z, long prec) {
  const CBall &u0 = z[0], &u1 = z[1], &t = z[2];
  std::array<CBall, 6> a;
  for (int i = 0; i < 6; ++i) a[i] = CBall(Ball::from_mpz(C.a()[i], prec));
  auto c = [prec](long n) { return CBall::from_si(n, prec); };
  CBall b2 = half(t * a[5] + c(3) * u1);
  CBall b1 = half(t * a[4] + c(3) * u1 * u1 + c(3) * u0 - b2 * b2);
  CBall b0 = half(t * a[3] + u1 * u1 * u1 + c(6) * u0 * u1 - c(2) * b1 * b2);
  // r = h mod u
  CBall r1 = u1 * u1 - u0 - b2 * u1 + b1;
  CBall r0 = u1 * u0 - b2 * u0 + b0;
  // G = F - r^2 / t, w = G / u
  std::array<CBall, 6> g = a;
  g[2] = g[2] - r1 * r1 / t;
  g[1] = g[1] - c(2) * r0 * r1 / t;
  g[0] = g[0] - r0 * r0 / t;
  CBall w3 = g[5];
  CBall w2 = g[4] - u1 * w3;
  CBall w1 = g[3] - u1 * w2 - u0 * w3;
  CBall w0 = g[2] - u1 * w1 - u0 * w2;
  return {c(1), -u1, u0, -(w0 + u0 * w2)};
}

bool lex_less(const CKummerPoint& a, const CKummerPoint& b) {
  for (int i = 0; i < 4; ++i) {
    int c = mpfr_cmp(a[i].re.mid(), b[i].re.mid());
    if (c != 0) return c < 0;
    c = mpfr_cmp(a[i].im.mid(), b[i].im.mid());
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace

CKummerPoint apply_delta(const Curve& C, const CKummerPoint& k) {
  KummerForms kf = kummer_forms(C);
  long prec = k[0].prec();
  CKummerPoint out;
  for (int i = 0; i < 4; ++i)
    out[i] = eval_form<CBall>(kf.delta[i], k, [prec](const Int& c) { return CBall(Ball::from_mpz(c, prec)); });
  return out;
}

std::vector<TorsionPoint> three_torsion_points(const Curve& C, long prec, TorsionSolveStats* stats) {
  if (prec < 64) throw std::domain_error("three_torsion_points: precision below 64 bits");
  const long wp = prec + 32;
  DSystem ds;
  BSystem bs;
  bs.prec = wp;
  for (int i = 0; i < 6; ++i) {
    ds.a[i] = cd(C.a()[i].get_d());
    bs.a[i] = CBall(Ball::from_mpz(C.a()[i], wp));
  }
  const double r = std::ldexp(1.0, -static_cast<int>(wp / 2));

  struct Found {
    Vec3<CBall> box, root;
  };
  std::vector<Found> found;
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> U(0.0, 2 * M_PI);
  TorsionSolveStats st;
  for (int attempt = 0; attempt < 8 && found.size() < 40; ++attempt) {
    ++st.attempts;
    Tracker tr{ds, std::polar(1.0, U(rng))};
    for (const auto& s : start_points()) {
      ++st.paths;
      auto end = tr.track(s);
      if (!end) continue;
      const auto& e = *end;
      if (std::abs(e[2]) < 1e-6 || norm3(e) > 1e7) continue;
      Vec3<CBall> z{cball_of(e[0], wp), cball_of(e[1], wp), cball_of(e[2], wp)};
      if (!refine(bs, z)) continue;
      Vec3<CBall> box;
      auto K = krawczyk(bs, z, r * (1 + cmag(z[0]) + cmag(z[1]) + cmag(z[2])), box);
      if (!K) continue;
      if ((*K)[2].contains_zero()) continue;
      bool dup = false;
      for (const auto& f : found)
        if (boxes_overlap(f.box, box)) dup = true;
      if (dup) continue;
      found.push_back({box, *K});
      ++st.certified;
    }
  }
  if (stats) *stats = st;
  if (found.size() != 40)
    throw PrecisionError("three_torsion_points: certified " + std::to_string(found.size()) + " of 40 roots");

  KummerForms kf = kummer_forms(C);
  std::vector<TorsionPoint> out;
  for (const auto& f : found) {
    TorsionPoint p;
    p.u0 = f.root[0];
    p.u1 = f.root[1];
    p.t = f.root[2];
    p.k = kummer_from_root(C, f.root, wp);
    p.delta1 = eval_form<CBall>(kf.delta[0], p.k, [wp](const Int& c) { return CBall(Ball::from_mpz(c, wp)); });
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const TorsionPoint& a, const TorsionPoint& b) { return lex_less(a.k, b.k); });
  return out;
}

std::vector<CKummerPoint> three_torsion_kummer(const Curve& C, long prec) {
  std::vector<CKummerPoint> out;
  for (auto& p : three_torsion_points(C, prec)) out.push_back(p.k);
  return out;
}

CBall three_torsion_product(const Curve& C, long prec) {
  auto pts = three_torsion_points(C, prec);
  CBall prod = CBall::from_si(1, prec + 32);
  for (const auto& p : pts) prod = prod * sqr(p.delta1);
  return prod;
}

}  // namespace ah
