#include "morphkit/error.hpp"
#include "morphkit/idw.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace morphkit;

TEST_CASE("weights on a line match hand evaluation") {
    const std::vector<Point> c{Point(0, 0, 0), Point(1, 0, 0)};
    const Vector w = weights_at(Point(0.25, 0, 0), c, {});
    const double expected = std::pow(0.25, -4) / (std::pow(0.25, -4) + std::pow(0.75, -4));
    CHECK(w(0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(w(0) == doctest::Approx(0.98780487804878).epsilon(1e-13));
    CHECK(w(1) == doctest::Approx(1.0 - expected).epsilon(1e-13));
    CHECK(w(1) == doctest::Approx(0.01219512195122).epsilon(1e-12));
}

TEST_CASE("equidistant target gets equal weights for every p") {
    const std::vector<Point> c{Point(-1, 0, 0), Point(1, 0, 0)};
    for (int p = 1; p <= 9; ++p) {
        IdwConfig cfg;
        cfg.p = p;
        const Vector w = weights_at(Point(0, 0.7, 0.2), c, cfg);
        CHECK(w(0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(w(1) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("target on a control gets the indicator vector") {
    const std::vector<Point> c{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0), Point(0, 0, 1)};
    for (std::size_t k = 0; k < c.size(); ++k) {
        const Vector w = weights_at(c[k], c, {});
        for (std::size_t j = 0; j < c.size(); ++j) CHECK(w(static_cast<Eigen::Index>(j)) == (j == k ? 1.0 : 0.0));
    }
    // Within the coincidence tolerance the nearest control wins.
    IdwConfig cfg;
    cfg.coincidence_tol = 1e-3;
    const Vector w = weights_at(Point(1e-4, 0, 0), c, cfg);
    CHECK(w(0) == 1.0);
    CHECK(w.sum() == 1.0);
}

TEST_CASE("weights_at rejects bad input") {
    CHECK_THROWS_AS(weights_at(Point::Zero(), std::vector<Point>{}, {}), Error);
    CHECK_THROWS_AS(weights_at(Point::Zero(), std::vector<Point>{Point(1, 0, 0), Point(1, 0, 0)}, {}), Error);
    IdwConfig bad;
    bad.p = 0;
    CHECK_THROWS_AS(weights_at(Point::Zero(), std::vector<Point>{Point(1, 0, 0)}, bad), Error);
}

TEST_CASE("near-coincident target does not overflow") {
    // d^-p with d = 1e-100 overflows double; the ratio form stays finite.
    const std::vector<Point> c{Point(0, 0, 0), Point(1, 0, 0)};
    IdwConfig cfg;
    cfg.coincidence_tol = 0.0;
    const Vector w = weights_at(Point(1e-100, 0, 0), c, cfg);
    CHECK(w.allFinite());
    CHECK(w(0) == 1.0);
    CHECK(w(1) == doctest::Approx(0.0).epsilon(1e-300));
}

TEST_CASE("assembly matches the direct formula") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Mesh m = oracle::random_cloud(10 + seed * 2, 0.4, seed);
        for (int p : {1, 2, 3, 4, 7}) {
            IdwConfig cfg;
            cfg.p = p;
            const IdwOperator op = assemble(m, m.boundary_ids(), m.interior_ids(), cfg);
            const Eigen::MatrixXd ref = oracle::idw_matrix(m, m.boundary_ids(), m.interior_ids(), p);
            REQUIRE(op.matrix().rows() == ref.rows());
            REQUIRE(op.matrix().cols() == ref.cols());
            CHECK((op.matrix() - ref).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
}

TEST_CASE("assembly shapes and partition of unity") {
    const Mesh m = oracle::random_cloud(60, 0.5, 9);
    const IdwOperator empty = assemble(m, m.boundary_ids(), {});
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == m.boundary_ids().size());

    const IdwOperator one = assemble(m, {m.boundary_ids()[0]}, m.interior_ids());
    CHECK((one.matrix().array() == 1.0).all());

    const IdwOperator op = assemble(m, m.boundary_ids(), m.interior_ids());
    for (Eigen::Index i = 0; i < op.matrix().rows(); ++i) CHECK(std::abs(op.matrix().row(i).sum() - 1.0) <= 1e-12);
    CHECK(op.matrix().minCoeff() >= 0.0);
    CHECK(op.matrix().maxCoeff() <= 1.0);

    // Three targets between two controls on a line.
    const Mesh line(3, {Point(0, 0, 0), Point(0.2, 0, 0), Point(0.5, 0, 0), Point(0.9, 0, 0), Point(1, 0, 0)}, {},
                    {0, 4});
    const IdwOperator l = assemble(line, {0, 4}, {1, 2, 3});
    const std::vector<Point> ctrl{Point(0, 0, 0), Point(1, 0, 0)};
    for (Eigen::Index i = 0; i < 3; ++i) {
        const Vector w = weights_at(line.node(static_cast<NodeId>(i + 1)), ctrl, {});
        CHECK((l.matrix().row(i).transpose() - w).norm() == 0.0);
    }
}

TEST_CASE("assembly errors name the offending row or column") {
    const Mesh line(3, {Point(0, 0, 0), Point(0.5, 0, 0), Point(1, 0, 0)}, {}, {0, 2});
    try {
        assemble(line, {0, 2}, {1, 0});
        FAIL("coincident target accepted");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }
    try {
        assemble(line, {0, 2, 0}, {1});
        FAIL("duplicate control accepted");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("coincide") != std::string::npos);
    }
    CHECK_THROWS_AS(assemble(line, {}, {1}), Error);
    CHECK_THROWS_AS(assemble(line, {7}, {1}), Error);
}

TEST_CASE("deform: translation exactness, linearity, hand value") {
    const Mesh m = oracle::random_cloud(80, 0.5, 4);
    const IdwOperator op = assemble(m, m.boundary_ids(), m.interior_ids());
    const std::size_t k = op.cols();

    const Point t(0.3, -1.7, 2.5);
    const DisplacementField constant(op.control_ids(), std::vector<Point>(k, t));
    const DisplacementField moved = deform(op, constant);
    for (const Point& v : moved.vectors()) CHECK((v - t).cwiseAbs().maxCoeff() <= 1e-12 * t.norm());

    const DisplacementField still = deform(op, DisplacementField::zeros(op.control_ids()));
    for (const Point& v : still.vectors()) CHECK(v.isZero(0.0));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<Point> a(k), b(k), c(k);
    const double alpha = -2.5;
    for (std::size_t j = 0; j < k; ++j) {
        a[j] = Point(g(rng), g(rng), g(rng));
        b[j] = Point(g(rng), g(rng), g(rng));
        c[j] = alpha * a[j] + b[j];
    }
    const auto da = deform(op, {op.control_ids(), a}).vectors();
    const auto db = deform(op, {op.control_ids(), b}).vectors();
    const auto dc = deform(op, {op.control_ids(), c}).vectors();
    for (std::size_t i = 0; i < dc.size(); ++i) {
        const Point expect = alpha * da[i] + db[i];
        CHECK((dc[i] - expect).norm() <= 1e-12 * std::max(1.0, expect.norm()));
    }

    const Mesh line(3, {Point(0, 0, 0), Point(0.25, 0, 0), Point(1, 0, 0)}, {}, {0, 2});
    const IdwOperator l = assemble(line, {0, 2}, {1});
    const auto out = deform(l, {{0, 2}, {Point(1, 0, 0), Point(0, 0, 0)}});
    CHECK(out.vectors()[0].x() == doctest::Approx(0.98780487804878).epsilon(1e-13));

    CHECK_THROWS_AS(deform(l, {{2, 0}, {Point(1, 0, 0), Point(0, 0, 0)}}), Error);
    CHECK_THROWS_AS(deform(l, {{0}, {Point(1, 0, 0)}}), Error);
}

TEST_CASE("weights decrease with distance") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Point> c(8);
        for (auto& x : c) x = Point(u(rng), u(rng), u(rng));
        const Point x(u(rng), u(rng), u(rng));
        const Vector w = weights_at(x, c, {});
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j)
                if ((x - c[i]).norm() < (x - c[j]).norm())
                    CHECK(w(static_cast<Eigen::Index>(i)) > w(static_cast<Eigen::Index>(j)));
    }
}
