// Unit tests for the density/energy core: pointwise evaluations, frozen
// two-sided variants, quadrature energies, the exact discrete gradient
// against finite differences, the auxiliary V-maps and the convex conjugate.
#include <catch2/catch_amalgamated.hpp>

#include "dplab/conjugate.hpp"
#include "dplab/energy.hpp"

using namespace dplab;

namespace {

Exponents exps(double p, double q, double alpha = 0.5) {
  Exponents e;
  e.p = p;
  e.q = q;
  e.alpha = alpha;
  return e;
}

Mat mat_of(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m(int(rows.size()), int(rows.begin()->size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("eval_H matches the scalar double-phase formula") {
  Grid g = Grid::cube(2, 1.0, 8);
  // p=2, q=3 sits outside the strict growth window; build the profile
  // directly to probe the pointwise formula
  DensityProfile d;
  d.exponents = exps(2.0, 3.0, 1.0);
  d.coefficient = coefficient_constant(g, 0.5);

  SECTION("zero gradient gives zero") {
    Mat z(2, 2);
    CHECK(eval_H(d, 0, z) == 0.0);
  }
  SECTION("a = 0 reduces to |z|^p") {
    auto d0 = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    Mat z = mat_of({{2.0, 0.0}, {0.0, 0.0}});
    CHECK_THAT(eval_H(d0, 3, z), Catch::Matchers::WithinRel(4.0, 1e-14));
  }
  SECTION("p=2, q=3, a=0.5, |z|=2 gives 4 + 0.5*8 = 8") {
    Mat z = mat_of({{2.0, 0.0}});
    z.rows = 1;
    CHECK_THAT(eval_H(d, 5, z), Catch::Matchers::WithinRel(8.0, 1e-14));
  }
  SECTION("node range and finiteness are enforced") {
    Mat z(2, 2);
    CHECK_THROWS_AS(eval_H(d, g.node_count(), z), IndexError);
    z(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eval_H(d, 0, z), DomainError);
  }
}

TEST_CASE("frozen variants take inf/sup of node samples in the ball") {
  SECTION("constant coefficient: both sides equal") {
    Grid g = Grid::cube(2, 1.0, 10);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_constant(g, 0.7));
    Ball B(Point{0.1, -0.2}, 0.4);
    const double want = std::pow(1.3, 2.0) + 0.7 * std::pow(1.3, 2.4);
    CHECK_THAT(eval_H_frozen(d, B, 1.3, FrozenSide::minus),
               Catch::Matchers::WithinRel(want, 1e-14));
    CHECK(eval_H_frozen(d, B, 1.3, FrozenSide::minus) ==
          eval_H_frozen(d, B, 1.3, FrozenSide::plus));
  }
  SECTION("a = 0 gives t^p") {
    Grid g = Grid::cube(2, 1.0, 10);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    CHECK_THAT(eval_H_frozen(d, Ball(Point(2), 0.5), 2.0, FrozenSide::plus),
               Catch::Matchers::WithinRel(4.0, 1e-14));
  }
  SECTION("a(x) = x1 on [0,1]^2, ball r=0.25 at (0.5,0.5): minus side 1.25 at t=1") {
    std::array<double, kMaxDim> lo{0.0, 0.0}, hi{1.0, 1.0};
    std::array<int, kMaxDim> nn{5, 5};
    Grid g = Grid::make(2, lo, hi, nn);
    auto d = DensityProfile::pure(
        exps(2.0, 2.4),
        make_coefficient(g, [](const Point& x) { return x[0]; }, 0.5));
    // grid minimum of x1 over nodes in the closed ball is 0.25
    CHECK_THAT(eval_H_frozen(d, Ball(Point{0.5, 0.5}, 0.25), 1.0, FrozenSide::minus),
               Catch::Matchers::WithinRel(1.25, 1e-14));
  }
  SECTION("disjoint ball errors") {
    Grid g = Grid::cube(2, 1.0, 10);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    CHECK_THROWS_AS(eval_H_frozen(d, Ball(Point{5.0, 5.0}, 0.05), 1.0, FrozenSide::minus),
                    EmptyRegionError);
  }
  SECTION("frozen sandwich: minus <= node value <= plus over the ball") {
    Grid g = Grid::cube(2, 1.0, 16);
    auto d = DensityProfile::pure(
        exps(2.0, 2.4),
        make_coefficient(g, [](const Point& x) { return std::abs(x[0] + 0.3 * x[1]); }, 0.5));
    Ball B(Point{0.2, -0.1}, 0.5);
    Mat z = mat_of({{0.7, -0.4}});
    const double lo = eval_H_frozen(d, B, frob(z), FrozenSide::minus);
    const double hi = eval_H_frozen(d, B, frob(z), FrozenSide::plus);
    for_each_node_in_ball(g, B, [&](long node, const Point&) {
      const double v = eval_H(d, node, z);
      CHECK(lo <= v * (1 + 1e-14));
      CHECK(v <= hi * (1 + 1e-14));
    });
  }
  SECTION("minus side is non-increasing as the ball grows") {
    Grid g = Grid::cube(2, 1.0, 16);
    auto d = DensityProfile::pure(
        exps(2.0, 2.4),
        make_coefficient(g, [](const Point& x) { return x[0] * x[0] + 0.1; }, 0.5));
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {0.2, 0.4, 0.6, 0.8}) {
      const double v = eval_H_frozen(d, Ball(Point(2), r), 1.7, FrozenSide::minus);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("total energy: exact cases and the hedgehog value") {
  SECTION("constant field has zero energy") {
    Grid g = Grid::cube(3, 1.0, 8);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    CHECK(total_energy(d, field_constant(g, Vec{1.0, 0.0, 0.0}, true)) == 0.0);
  }
  SECTION("affine field: |region| * (|M|^p + a0 |M|^q) exactly") {
    Grid g = Grid::cube(2, 1.0, 12);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_constant(g, 0.3));
    Mat M = mat_of({{0.5, -0.2}, {0.1, 0.4}});
    GridField u = field_affine(g, 2, M, Vec{0.0, 1.0});
    const auto cells = region_cells(g, Region::full());
    const double vol = region_volume(g, cells);
    const double want =
        vol * (std::pow(frob(M), 2.0) + 0.3 * std::pow(frob(M), 2.4));
    CHECK_THAT(total_energy(d, u), Catch::Matchers::WithinRel(want, 1e-12));
  }
  SECTION("hedgehog on the unit ball approaches 8 pi under refinement") {
    double prev_err = 1.0;
    for (int nodes : {24, 48}) {
      Grid g = Grid::cube(3, 1.0, nodes - 1);
      auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
      const double E = total_energy(d, field_hedgehog(g), Region::in_ball(Ball(Point(3), 1.0)));
      const double err = std::abs(E - 8.0 * kPi) / (8.0 * kPi);
      CHECK(err < prev_err);
      prev_err = err;
    }
    CHECK(prev_err < 0.03);
  }
  SECTION("empty region errors") {
    Grid g = Grid::cube(2, 1.0, 8);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    GridField u = field_constant(g, Vec{1.0, 0.0}, true);
    CHECK_THROWS_AS(total_energy(d, u, Region::in_ball(Ball(Point{9.0, 9.0}, 0.01))),
                    EmptyRegionError);
  }
}

TEST_CASE("energy gradient") {
  SECTION("constant field has zero gradient") {
    Grid g = Grid::cube(2, 1.0, 8);
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    GridField grad = energy_gradient(d, field_constant(g, Vec{0.0, 1.0}, true));
    for (double v : grad.values) CHECK(v == 0.0);
  }

  SECTION("p=2, a=0: interior rows equal the five-point Laplacian stencil") {
    // hand-computed: dE/du(j) = 2 h^{n-2} (4 u_j - sum of axis neighbours)
    Grid g = Grid::cube(2, 1.0, 4);  // 5x5 nodes
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    GridField u = GridField::zeros(g, 1, false);
    Rng rng(3);
    for (long i = 0; i < g.node_count(); ++i) u.set(i, Vec{rng.uniform(-1.0, 1.0)});
    GridField grad = energy_gradient(d, u, Region::full(), 0.0);
    const double scale = 2.0;  // h^{n-2} = 1 for n = 2
    for (int i = 1; i < 4; ++i)
      for (int j = 1; j < 4; ++j) {
        std::array<int, kMaxDim> mi{i, j};
        auto at = [&](int di, int dj) {
          std::array<int, kMaxDim> mj{i + di, j + dj};
          return u.component(g.node_index(mj), 0);
        };
        const double want =
            scale * (4.0 * at(0, 0) - at(1, 0) - at(-1, 0) - at(0, 1) - at(0, -1));
        CHECK_THAT(grad.component(g.node_index(mi), 0),
                   Catch::Matchers::WithinAbs(want, 1e-12));
      }
  }

  SECTION("matches central finite differences of the regularized energy") {
    const double mu = 1e-4;
    for (auto [p, q, alpha] : {std::tuple{2.0, 2.4, 0.5}, std::tuple{2.5, 3.0, 0.6}}) {
      Grid g = Grid::cube(2, 1.0, 6);
      auto d = DensityProfile::pure(
          exps(p, q, alpha),
          make_coefficient(g, [](const Point& x) { return 0.4 + 0.3 * x[0]; }, 0.5));
      GridField u = field_smooth_random(g, 2, 17, 0.8);
      GridField grad = energy_gradient(d, u, Region::full(), mu);
      Rng rng(5);
      for (int trial = 0; trial < 12; ++trial) {
        const size_t k = size_t(rng.next_u64() % uint64_t(u.values.size()));
        const double step = 3e-5;
        GridField up = u, um = u;
        up.values[k] += step;
        um.values[k] -= step;
        const double fd =
            (total_energy(d, up, Region::full(), mu) - total_energy(d, um, Region::full(), mu)) /
            (2.0 * step);
        const double an = grad.values[k];
        CHECK_THAT(an, Catch::Matchers::WithinRel(fd, 1e-6) ||
                           Catch::Matchers::WithinAbs(fd, 1e-12));
      }
    }
  }

  SECTION("mu = 0 with p < 2 is rejected") {
    Grid g = Grid::cube(2, 1.0, 6);
    auto d = DensityProfile::pure(exps(1.5, 1.8, 0.5), coefficient_zero(g));
    GridField u = field_constant(g, Vec{1.0, 0.0}, true);
    CHECK_THROWS_AS(energy_gradient(d, u, Region::full(), 0.0), SingularityError);
  }
}

TEST_CASE("V-maps") {
  SECTION("t = 2 is the identity, 0 maps to 0") {
    Mat z = mat_of({{1.0, -2.0}, {0.5, 0.0}});
    const Mat v = v_map(z, 2.0);
    for (int k = 0; k < 4; ++k) CHECK(v.a[size_t(k)] == z.a[size_t(k)]);
    CHECK(frob(v_map(Mat(2, 2), 3.0)) == 0.0);
  }
  SECTION("t=3, z=(4,0) maps to (8,0)") {
    Mat z = mat_of({{4.0, 0.0}});
    const Mat v = v_map(z, 3.0);
    CHECK_THAT(v(0, 0), Catch::Matchers::WithinRel(8.0, 1e-14));
    CHECK(v(0, 1) == 0.0);
  }
  SECTION("identity |V_p|^2 + a |V_q|^2 = H to machine precision") {
    Exponents e = exps(2.3, 2.7);
    Rng rng(11);
    for (int k = 0; k < 20000; ++k) {
      Mat z(2, 3);
      for (int i = 0; i < 6; ++i) z.a[size_t(i)] = rng.normal() * std::exp(rng.uniform(-3, 3));
      const double a_val = rng.uniform(0.0, 2.0);
      const double H = std::pow(frob(z), e.p) + a_val * std::pow(frob(z), e.q);
      CHECK(std::abs(v_identity_gap(e, a_val, z)) <= 1e-12 * std::max(1.0, H));
    }
  }
  SECTION("equivalence ratio: exact values and empirical envelope") {
    Rng rng(13);
    Mat z1 = mat_of({{0.3, -1.2}}), z2 = mat_of({{2.0, 0.7}});
    CHECK_THAT(v_equivalence_ratio(z1, z2, 2.0), Catch::Matchers::WithinRel(1.0, 1e-14));
    // antipodal pair: |V(z)-V(-z)| = 2|z|^{t/2}, denominator 2^{t/2}|z|^{t/2},
    // so the ratio is 2^{1-t/2} (equal to 1 only at t = 2)
    for (double t : {2.0, 2.5, 3.0}) {
      Mat mz1 = z1;
      mz1 *= -1.0;
      CHECK_THAT(v_equivalence_ratio(z1, mz1, t),
                 Catch::Matchers::WithinRel(std::pow(2.0, 1.0 - t / 2.0), 1e-12));
    }
    CHECK_THROWS_AS(v_equivalence_ratio(z1, z1, 2.5), DegeneratePairError);
    // envelope for t = 3 over random pairs in R^{1x2}
    double lo = 1e9, hi = 0.0;
    for (int k = 0; k < 100000; ++k) {
      Mat a(1, 2), b(1, 2);
      for (int i = 0; i < 2; ++i) {
        a.a[size_t(i)] = rng.normal() * std::exp(rng.uniform(-2, 2));
        b.a[size_t(i)] = rng.normal() * std::exp(rng.uniform(-2, 2));
      }
      if (frob(a - b) == 0.0) continue;
      const double r = v_equivalence_ratio(a, b, 3.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo >= 0.3);
    CHECK(hi <= 3.4);
  }
}

TEST_CASE("monotonicity probe") {
  Grid g = Grid::cube(2, 1.0, 8);
  auto d7 = DensityProfile::pure(exps(2.5, 2.9, 0.5), coefficient_constant(g, 0.7));

  SECTION("z1 = z2 gives zero") {
    Mat z = mat_of({{0.4, 0.1}});
    const auto probe = monotonicity_gap(d7, 0, z, z);
    CHECK(probe.inner == 0.0);
  }
  SECTION("p=2, a=0: inner product is exactly |z1-z2|^2") {
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_zero(g));
    Mat z1 = mat_of({{0.7, -0.3}}), z2 = mat_of({{-0.2, 0.5}});
    const auto probe = monotonicity_gap(d, 0, z1, z2);
    CHECK_THAT(probe.inner, Catch::Matchers::WithinRel(frob_sq(z1 - z2), 1e-13));
  }
  SECTION("inner product nonnegative over random pairs") {
    Rng rng(23);
    for (int k = 0; k < 20000; ++k) {
      Mat z1(2, 2), z2(2, 2);
      for (int i = 0; i < 4; ++i) {
        z1.a[size_t(i)] = rng.normal() * std::exp(rng.uniform(-3, 3));
        z2.a[size_t(i)] = rng.normal() * std::exp(rng.uniform(-3, 3));
      }
      CHECK(monotonicity_gap(d7, 1, z1, z2).inner >= 0.0);
    }
  }
}

TEST_CASE("strict convexity probe of H") {
  Rng rng(29);
  Exponents e = exps(2.2, 2.6);
  for (int k = 0; k < 5000; ++k) {
    Mat z1(1, 2), z2(1, 2);
    for (int i = 0; i < 2; ++i) {
      z1.a[size_t(i)] = rng.normal();
      z2.a[size_t(i)] = rng.normal();
    }
    if (frob(z1 - z2) < 1e-6) continue;
    const double a_val = rng.uniform(0.0, 1.0);
    const double lam = rng.uniform(0.05, 0.95);
    Mat mid = z1;
    mid *= lam;
    Mat other = z2;
    other *= (1.0 - lam);
    for (int i = 0; i < 2; ++i) mid.a[size_t(i)] += other.a[size_t(i)];
    auto H = [&](const Mat& z) {
      return std::pow(frob(z), e.p) + a_val * std::pow(frob(z), e.q);
    };
    CHECK(H(mid) < lam * H(z1) + (1.0 - lam) * H(z2));
  }
}

TEST_CASE("density profile assumptions") {
  Grid g = Grid::cube(2, 1.0, 8);
  SECTION("pure variant: nu = L = 1 exactly") {
    auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_constant(g, 0.4));
    Rng rng(31);
    for (int k = 0; k < 1000; ++k) {
      const long node = long(rng.next_u64() % uint64_t(g.node_count()));
      const double t = std::exp(rng.uniform(-3, 3));
      const double H = d.H0(d.coefficient.at(node), t);
      CHECK(d.radial(d.coefficient.at(node), 1.0, t) == H);
    }
  }
  SECTION("modulated variant stays in [nu1 H, L1 H] and is non-decreasing in t") {
    auto b = [](const Point& x, const Vec& v) {
      return 1.0 + 0.5 * std::sin(x[0]) * v[0] / (1.0 + norm2_sq(v));
    };
    auto d = DensityProfile::modulated(exps(2.0, 2.4), coefficient_constant(g, 0.4), b, 0.5,
                                       1.5, Vec{0.3, 0.9});
    Rng rng(37);
    for (int k = 0; k < 2000; ++k) {
      const long node = long(rng.next_u64() % uint64_t(g.node_count()));
      const Point x = g.node_point(node);
      Vec v{rng.normal(), rng.normal()};
      const double t = std::exp(rng.uniform(-2, 2));
      const double H = d.H0(d.coefficient.at(node), t);
      const double F = d.radial(d.coefficient.at(node), d.b_factor(x, v), t);
      CHECK(F >= 0.5 * H - 1e-15);
      CHECK(F <= 1.5 * H + 1e-15);
      const double F2 = d.radial(d.coefficient.at(node), d.b_factor(x, v), t * 1.01);
      CHECK(F2 >= F);
    }
  }
}

TEST_CASE("radial profile derivatives bracket the density quotients") {
  // F'(t) t and F''(t) t^2 stay within [p, q]- and [p(p-1), q(q-1)]-multiples
  // of H(t), so F'' t is comparable to F' for the model density
  Grid g = Grid::cube(2, 1.0, 8);
  auto d = DensityProfile::pure(exps(2.0, 2.4), coefficient_constant(g, 0.7));
  Rng rng(43);
  for (int k = 0; k < 2000; ++k) {
    const double t = std::exp(rng.uniform(-4, 4));
    const double a_val = 0.7;
    const double H = d.H0(a_val, t);
    const double d1 = d.radial_d1(a_val, 1.0, t);
    const double d2 = d.radial_d2(a_val, 1.0, t);
    CHECK(d1 * t >= 2.0 * H - 1e-12 * H);
    CHECK(d1 * t <= 2.4 * H + 1e-12 * H);
    CHECK(d2 * t * t >= 2.0 * H - 1e-12 * H);
    CHECK(d2 * t * t <= 2.4 * 1.4 * H + 1e-12 * H);
    CHECK(d2 * t <= d1 * 1.4 + 1e-12 * d1);
  }
}

TEST_CASE("convex conjugate of H0") {
  SECTION("zero at t = 0") { CHECK(conjugate_H0(0.0, 1.0, exps(2.0, 2.4)) == 0.0); }
  SECTION("a0=0, p=2: closed form t^2/4") {
    CHECK_THAT(conjugate_H0(1.0, 0.0, exps(2.0, 2.4)),
               Catch::Matchers::WithinRel(0.25, 1e-9));
    const double t = 2.7;
    // (p-1) p^{-p/(p-1)} t^{p/(p-1)}
    CHECK_THAT(conjugate_H0(t, 0.0, exps(2.0, 2.4)),
               Catch::Matchers::WithinRel(t * t / 4.0, 1e-9));
  }
  SECTION("a0=1, p=2, q=4: matches a dense grid search") {
    Exponents e = exps(2.0, 4.0);
    const double t = 3.0, a0 = 1.0;
    double best = 0.0;
    for (int k = 0; k <= 400000; ++k) {
      const double s = 4.0 * k / 400000.0;
      best = std::max(best, s * t - (s * s + a0 * std::pow(s, 4.0)));
    }
    CHECK_THAT(conjugate_H0(t, a0, e), Catch::Matchers::WithinRel(best, 1e-6));
  }
  SECTION("Young inequality in corrected form") {
    Exponents e = exps(2.0, 2.4);
    Rng rng(41);
    for (int k = 0; k < 3000; ++k) {
      const double s = std::exp(rng.uniform(-4, 3));
      const double t = std::exp(rng.uniform(-4, 3));
      const double kap = rng.uniform(0.02, 0.98);
      const double a0 = rng.uniform(0.0, 2.0);
      const double rhs = kap * H0_value(s, a0, e) +
                         std::pow(kap, -1.0 / (e.p - 1.0)) * conjugate_H0(t, a0, e);
      CHECK(s * t <= rhs * (1.0 + 1e-8) + 1e-12);
    }
  }
}

TEST_CASE("field serialization round trip") {
  Grid g = Grid::cube(3, 1.0, 6);
  GridField u = field_random_sphere(g, 3, 99);
  const std::string bin = "test_field.bin", side = "test_field.json";
  save_field(u, bin, side);
  GridField v = load_field(bin, side);
  REQUIRE(v.values.size() == u.values.size());
  for (size_t i = 0; i < u.values.size(); ++i) CHECK(v.values[i] == u.values[i]);
  CHECK(v.grid.same_layout(u.grid));
  CHECK(v.constrained == u.constrained);
  std::remove(bin.c_str());
  std::remove(side.c_str());
}

TEST_CASE("exponent window is strict") {
  CHECK_THROWS_AS(exps(2.0, 2.5, 0.5).validate(), ExponentError);   // q = p + alpha
  CHECK_THROWS_AS(exps(2.0, 2.0, 0.5).validate(), ExponentError);   // q = p
  CHECK_THROWS_AS(exps(1.0, 1.4, 0.5).validate(), ExponentError);   // p = 1
  CHECK_NOTHROW(exps(2.0, 2.4, 0.5).validate());
  CHECK_THROWS_AS(exps(2.0, 2.4, 0.5).validate(2), ExponentError);  // q >= N
  CHECK_NOTHROW(exps(2.0, 2.4, 0.5).validate(3));
}

TEST_CASE("coefficient recipes and seminorm estimate") {
  Grid g = Grid::cube(2, 1.0, 24);
  SECTION("hyperplane distance has unit seminorm and exact zero set") {
    auto a = coefficient_dist_to_hyperplane(g, 0.5, Vec{1.0, 0.0}, 0.0);
    CHECK(a.holder_seminorm == 1.0);
    const double est = estimate_holder_seminorm(g, a.values, 0.5, 50000);
    CHECK(est <= 1.1 + 1e-12);
    CHECK(est >= 0.8);
    // sampled two-point quotients never exceed the stored seminorm * 1.1
    Rng rng(7);
    for (int k = 0; k < 2000; ++k) {
      const long i = long(rng.next_u64() % uint64_t(g.node_count()));
      const long j = long(rng.next_u64() % uint64_t(g.node_count()));
      if (i == j) continue;
      const double q = std::abs(a.at(i) - a.at(j)) /
                       std::pow(dist(g.node_point(i), g.node_point(j)), 0.5);
      CHECK(q <= a.holder_seminorm * 1.1 + 1e-12);
    }
  }
  SECTION("negative values are rejected") {
    CHECK_THROWS_AS(make_coefficient(g, [](const Point& x) { return x[0]; }, 0.5),
                    ValidationError);
  }
  SECTION("cell value is the corner mean, exact for affine coefficients") {
    auto a = make_coefficient(g, [](const Point& x) { return 1.0 + 0.5 * x[0] - 0.2 * x[1]; },
                              1.0);
    const long cell = g.cell_index({3, 5});
    const Point c = g.cell_center({3, 5});
    CHECK_THAT(a.cell_value(cell),
               Catch::Matchers::WithinRel(1.0 + 0.5 * c[0] - 0.2 * c[1], 1e-13));
  }
}
