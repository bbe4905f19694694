#include <doctest.h>

#include "commlab/error.hpp"
#include "commlab/grid.hpp"
#include "commlab/reference.hpp"
#include "oracles.hpp"

using namespace commlab;

TEST_CASE("grid spacings") {
  const Grid a = make_grid(1, 8, 1.0);
  CHECK(a.dx() == doctest::Approx(0.25));
  CHECK(a.dxi() == doctest::Approx(0.5));
  const Grid b = make_grid(2, 16, 4.0);
  CHECK(b.dx() == doctest::Approx(0.5));
  CHECK(b.dxi() == doctest::Approx(0.125));
  CHECK(b.size() == 256);
  for (const Grid& g : {a, b}) CHECK(g.dx() * g.dxi() * g.n() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("grid rejects bad parameters") {
  CHECK_THROWS_AS(make_grid(1, 7, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, 6, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, 8, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1, 8, -1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(0, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(4, 8, 1.0), InvalidArgument);
}

TEST_CASE("lattice points and ordering") {
  const Grid g = make_grid(2, 8, 1.0);
  CHECK(g.x(0)[0] == doctest::Approx(-1.0));
  CHECK(g.x(1)[1] == doctest::Approx(-0.75));  // last axis fastest
  CHECK(g.xi(0)[0] == doctest::Approx(-2.0));
  const std::size_t centre = g.ravel({4, 4, 0});
  CHECK(g.xi(centre)[0] == 0.0);
  CHECK(g.xi(centre)[1] == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.ravel(g.unravel(i)) == i);
}

TEST_CASE("transform of a constant") {
  const Grid g = make_grid(1, 8, 1.0);
  const SampledField u(g, Side::spatial, std::vector<cplx>(8, 1.0));
  const SampledField uh = forward_ft(u);
  CHECK(uh.side == Side::frequency);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double expected = g.xi(i)[0] == 0.0 ? 2.0 : 0.0;
    CHECK(std::abs(uh[i] - expected) < 1e-14);
  }
}

TEST_CASE("lattice exponentials are eigenmodes") {
  for (const Grid& g : {make_grid(1, 16, 2.0), make_grid(2, 8, 1.5)}) {
    const std::size_t k = g.size() / 3;
    const Point xik = g.xi(k);
    const SampledField u = sample_spatial(g, [&](const Point& x) { return std::polar(1.0, 2 * oracle::pi * dot(x, xik)); });
    const SampledField uh = forward_ft(u);
    const double full = std::pow(2.0 * g.half_width(), g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(uh[i] - (i == k ? full : 0.0)) < 1e-12);

    // the single mode back on the spatial side
    SampledField delta(g, Side::frequency);
    delta[k] = 1.0;
    const SampledField v = inverse_ft(delta);
    const double scale = std::pow(g.dxi(), g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(v[i] - scale * u[i]) < 1e-13);
  }
}

TEST_CASE("inverse of a scaled delta at the origin is one") {
  const Grid g = make_grid(2, 16, 3.0);
  SampledField v(g, Side::frequency);
  v[g.ravel({8, 8, 0})] = std::pow(2.0 * g.half_width(), 2);
  const SampledField u = inverse_ft(v);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(u[i] - 1.0) < 1e-13);
}

TEST_CASE("gaussian transform") {
  // exp(-pi x^2) is its own transform; periodization and truncation are far below 1e-8 at L = 8.
  const Grid g = make_grid(1, 128, 8.0);
  const SampledField u = sample_spatial(g, [](const Point& x) { return std::exp(-oracle::pi * x[0] * x[0]); });
  const SampledField uh = forward_ft(u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.xi(i)[0];
    CHECK(std::abs(uh[i] - std::exp(-oracle::pi * xi * xi)) < 1e-8);
  }
}

TEST_CASE("transform matches the direct sum") {
  for (const Grid& g : {make_grid(1, 32, 1.7), make_grid(2, 8, 0.9), make_grid(3, 8, 1.2)}) {
    const SampledField u(g, Side::spatial, oracle::random_field(g.size(), 11));
    const SampledField uh = forward_ft(u);
    for (std::size_t k = 0; k < g.size(); k += 7) CHECK(std::abs(uh[k] - oracle::dft_at(g, u.values, g.xi(k))) < 1e-11);
    const SampledField naive = reference::naive_forward_ft(u);
    CHECK(oracle::max_abs_diff(uh.values, naive.values) < 1e-11);
    const SampledField back = reference::naive_inverse_ft(uh);
    CHECK(oracle::max_abs_diff(back.values, u.values) < 1e-11);
  }
}

TEST_CASE("roundtrip, Plancherel and linearity on random fields") {
  for (int d = 1; d <= 3; ++d) {
    for (int n : {8, 16, d == 1 ? 256 : 32}) {
      for (double l : {0.5, 3.0}) {
        const Grid g = make_grid(d, n, l);
        const SampledField u(g, Side::spatial, oracle::random_field(g.size(), 7u + n));
        const SampledField w(g, Side::spatial, oracle::random_field(g.size(), 99u + n));
        const SampledField uh = forward_ft(u);
        const SampledField back = inverse_ft(uh);
        CHECK(oracle::max_abs_diff(back.values, u.values) / oracle::max_abs(u.values) < 1e-12);

        double spectral = 0.0;
        for (const auto& z : uh.values) spectral += std::norm(z);
        spectral *= std::pow(g.dxi(), d);
        const double spatial = std::pow(lp_norm(u, 2.0), 2);
        CHECK(std::abs(spatial - spectral) / spatial < 1e-10);

        const cplx alpha{0.3, -1.2};
        const cplx beta{2.0, 0.5};
        SampledField mix(g, Side::spatial);
        for (std::size_t i = 0; i < g.size(); ++i) mix[i] = alpha * u[i] + beta * w[i];
        const SampledField mh = forward_ft(mix);
        const SampledField wh = forward_ft(w);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(mh[i] - alpha * uh[i] - beta * wh[i]));
        CHECK(err / oracle::max_abs(mh.values) < 1e-12);
      }
    }
  }
}

TEST_CASE("translation becomes modulation") {
  const Grid g = make_grid(2, 16, 2.0);
  const SampledField u(g, Side::spatial, oracle::random_field(g.size(), 5));
  const std::array<int, 3> shift{3, -5, 0};
  SampledField shifted(g, Side::spatial);
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    for (int a = 0; a < 2; ++a) idx[a] = ((idx[a] - shift[a]) % 16 + 16) % 16;
    shifted[i] = u[g.ravel(idx)];
  }
  const SampledField uh = forward_ft(u);
  const SampledField sh = forward_ft(shifted);
  const Point h{shift[0] * g.dx(), shift[1] * g.dx(), 0.0};
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    err = std::max(err, std::abs(sh[k] - std::polar(1.0, -2 * oracle::pi * dot(h, g.xi(k))) * uh[k]));
  }
  CHECK(err / oracle::max_abs(uh.values) < 1e-12);
}

TEST_CASE("side mismatches are rejected") {
  const Grid g = make_grid(1, 8, 1.0);
  const SampledField u(g, Side::spatial);
  const SampledField v(g, Side::frequency);
  CHECK_THROWS_AS(forward_ft(v), InvalidArgument);
  CHECK_THROWS_AS(inverse_ft(u), InvalidArgument);
  CHECK_THROWS_AS(pointwise_mul(u, v), InvalidArgument);
  CHECK_THROWS_AS(pointwise_mul(u, SampledField(make_grid(1, 16, 1.0), Side::spatial)), InvalidArgument);
  CHECK_THROWS_AS(SampledField(g, Side::spatial, std::vector<cplx>(5)), InvalidArgument);
}

TEST_CASE("lp norms") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g = make_grid(d, 16, 2.0);
    const SampledField one(g, Side::spatial, std::vector<cplx>(g.size(), 1.0));
    Box box;
    for (int a = 0; a < d; ++a) {
      box.lo[a] = -1.0;
      box.hi[a] = 1.0;
    }
    CHECK(lp_norm(one, 2.0, box) == doctest::Approx(std::pow(2.0, d / 2.0)).epsilon(1e-12));
    const SampledField c(g, Side::spatial, std::vector<cplx>(g.size(), cplx{3.0, -4.0}));
    CHECK(lp_norm(c, INFINITY, box) == doctest::Approx(5.0));
    CHECK(lp_norm(c, INFINITY) == doctest::Approx(5.0));
  }

  // int_{-1}^{1} x^2 dx = 2/3
  const double exact = std::sqrt(2.0 / 3.0);
  double previous = INFINITY;
  for (int n : {64, 256, 1024}) {
    const Grid g = make_grid(1, n, 1.0);
    const SampledField x = sample_spatial(g, [](const Point& p) { return cplx{p[0], 0.0}; });
    const double err = std::abs(lp_norm(x, 2.0) - exact);
    if (n == 256) CHECK(err < 1e-3);
    CHECK(err < previous);
    previous = err;
  }

  const Grid g = make_grid(1, 16, 1.0);
  const SampledField u(g, Side::spatial, oracle::random_field(16, 3));
  CHECK_THROWS_AS(lp_norm(u, 0.5), InvalidArgument);
  Box empty;
  empty.lo[0] = 0.01;
  empty.hi[0] = 0.02;
  CHECK_THROWS_AS(lp_norm(u, 2.0, empty), InvalidArgument);
}

TEST_CASE("pointwise products") {
  const Grid g = make_grid(1, 32, 1.0);
  const SampledField u(g, Side::spatial, oracle::random_field(32, 21));
  const SampledField one(g, Side::spatial, std::vector<cplx>(32, 1.0));
  CHECK(oracle::max_abs_diff(pointwise_mul(u, one).values, u.values) == 0.0);
  CHECK(oracle::max_abs(pointwise_mul(u, SampledField(g, Side::spatial)).values) == 0.0);
  const Point xik = g.xi(20);
  auto mode = [&](double f) {
    return sample_spatial(g, [&](const Point& x) { return std::polar(1.0, 2 * oracle::pi * f * x[0]); });
  };
  const SampledField sq = pointwise_mul(mode(xik[0]), mode(xik[0]));
  CHECK(oracle::max_abs_diff(sq.values, mode(2 * xik[0]).values) < 1e-13);
}
