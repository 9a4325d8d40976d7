#include <doctest.h>

#include <cmath>

#include "netarch/arch_univariate.hpp"
#include "netarch/data.hpp"
#include "netarch/network.hpp"
#include "netarch/simulate.hpp"

using namespace netarch;

namespace {

ReturnPanel panel_from_rows(const std::vector<std::vector<double>>& rows) {
    ReturnPanel p;
    const int n = static_cast<int>(rows.size());
    const int T = static_cast<int>(rows[0].size());
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "S%02d", i);
        p.tickers.push_back(buf);
    }
    p.dates = synthetic_dates(T);
    p.returns.resize(n, T);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < T; ++t) p.returns(i, t) = rows[i][t];
    return p;
}

ReturnPanel random_panel(int n, int T, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> rows(n, std::vector<double>(T));
    for (auto& r : rows)
        for (auto& v : r) v = rng.uniform() - 0.5;
    return panel_from_rows(rows);
}

}  // namespace

TEST_CASE("euclidean distance examples") {
    const ReturnPanel p = panel_from_rows({{1, 2, 2}, {1, 0, 0}, {1, 2, 2}});
    const DistanceMatrix d = dist_euclidean(p);
    CHECK(d.d(0, 1) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    CHECK(d.d(0, 2) == 0.0);  // identical rows
    d.check();                // symmetric, zero diagonal
}

TEST_CASE("correlation distance boundary values") {
    // row1 = 2*row0 -> rho=1; row2 = -row0 -> rho=-1; row3 orthogonal -> rho=0
    const ReturnPanel p =
        panel_from_rows({{1, -1, 1, -1}, {2, -2, 2, -2}, {-1, 1, -1, 1}, {1, 1, -1, -1}});
    const DistanceMatrix d = dist_correlation(p);
    CHECK(d.d(0, 1) == doctest::Approx(0.0));
    CHECK(d.d(0, 2) == doctest::Approx(2.0));
    CHECK(d.d(0, 3) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("constant stock raises DegenerateSeries") {
    const ReturnPanel p = panel_from_rows({{1, 1, 1}, {1, 0, 2}});
    CHECK_THROWS_AS(dist_correlation(p), Error);
}

TEST_CASE("AR-coefficient distance uses the zero-padding rule") {
    // Two log-ARCH series with different persistence; the oracle recomputes
    // the padded Euclidean distance from the same per-stock AR fits.
    const Vector g1 = (Vector(1) << 0.5).finished();
    const Vector g2 = (Vector(2) << 0.3, 0.2).finished();
    const Vector y1 = simulate_univariate(-4.0, g1, 4000, 800, {21});
    const Vector y2 = simulate_univariate(-4.0, g2, 4000, 800, {22});
    ReturnPanel p = panel_from_rows({std::vector<double>(y1.data(), y1.data() + y1.size()),
                                     std::vector<double>(y2.data(), y2.data() + y2.size())});
    ZeroPolicy policy;
    const LogVolPanel v = log_squared(p, policy);
    const DistanceMatrix d = dist_logarch(v, 5, InfoCriterion::bic);

    REQUIRE(d.ar_orders.count("S00") == 1);
    REQUIRE(d.ar_orders.count("S01") == 1);
    const int p1 = d.ar_orders.at("S00"), p2 = d.ar_orders.at("S01");

    // oracle: refit each stock at its selected order, pad, take the norm
    const UnivariateFit f1 = fit_logarch(v.values.row(0).transpose(), p1);
    const UnivariateFit f2 = fit_logarch(v.values.row(1).transpose(), p2);
    const int pmax = std::max(p1, p2);
    double s = 0.0;
    for (int q = 0; q < pmax; ++q) {
        const double a = q < p1 ? f1.gamma(q) : 0.0;
        const double b = q < p2 ? f2.gamma(q) : 0.0;
        s += (a - b) * (a - b);
    }
    CHECK(d.d(0, 1) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
    CHECK(d.d(0, 0) == 0.0);
}

TEST_CASE("hand-evaluated padding: gamma (0.5) vs (0.3, 0.4)") {
    // the rule itself, evaluated directly
    const double d = std::sqrt((0.5 - 0.3) * (0.5 - 0.3) + 0.4 * 0.4);
    CHECK(d == doctest::Approx(0.4472).epsilon(1e-4));
}

TEST_CASE("identical series share order and have zero AR distance") {
    const Vector g = (Vector(1) << 0.4).finished();
    const Vector y = simulate_univariate(-4.0, g, 2000, 800, {31});
    std::vector<double> row(y.data(), y.data() + y.size());
    const ReturnPanel p = panel_from_rows({row, row, std::vector<double>(row.rbegin(), row.rend())});
    ZeroPolicy policy;
    const DistanceMatrix d = dist_logarch(log_squared(p, policy), 3, InfoCriterion::bic);
    CHECK(d.d(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.ar_orders.at("S00") == d.ar_orders.at("S01"));
}

TEST_CASE("inverse-distance weights") {
    DistanceMatrix d;
    d.tickers = {"A", "B", "C"};
    d.d = Matrix::Constant(3, 3, 2.0);
    d.d.diagonal().setZero();

    SUBCASE("raw") {
        const EdgeWeightMatrix w = weights_inverse_distance(d, false);
        CHECK(w.weights(0, 1) == doctest::Approx(0.5));
        CHECK(w.weights(0, 0) == 0.0);
        CHECK(w.normalization == EdgeWeightMatrix::Norm::raw);
    }
    SUBCASE("row-normalized") {
        const EdgeWeightMatrix w = weights_inverse_distance(d, true);
        CHECK(w.weights(0, 1) == doctest::Approx(0.5));
        CHECK(w.weights.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.spectral_radius() <= 1.0 + 1e-10);
    }
    SUBCASE("coincident series") {
        d.d(0, 1) = d.d(1, 0) = 0.0;
        CHECK_THROWS_AS(weights_inverse_distance(d, true), Error);
    }
}

TEST_CASE("knn weights: k entries of 1/k per row, ticker-order tie break") {
    const ReturnPanel p = random_panel(6, 40, 5);
    const DistanceMatrix d = dist_euclidean(p);

    SUBCASE("row structure") {
        const EdgeWeightMatrix w = weights_knn(d, 2);
        for (int i = 0; i < 6; ++i) {
            int nz = 0;
            for (int j = 0; j < 6; ++j)
                if (w.weights(i, j) != 0.0) {
                    ++nz;
                    CHECK(w.weights(i, j) == doctest::Approx(0.5));
                }
            CHECK(nz == 2);
            CHECK(w.weights.row(i).sum() == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    SUBCASE("n=3, k=2 connects everything") {
        const ReturnPanel q = random_panel(3, 20, 9);
        const EdgeWeightMatrix w = weights_knn(dist_euclidean(q), 2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(w.weights(i, j) == (i == j ? 0.0 : 0.5));
    }
    SUBCASE("ties resolved toward earlier tickers") {
        DistanceMatrix tie;
        tie.tickers = {"A", "B", "C", "D"};
        tie.d = Matrix::Constant(4, 4, 1.0);
        tie.d.diagonal().setZero();
        const EdgeWeightMatrix w = weights_knn(tie, 2);
        CHECK(w.weights(0, 1) == doctest::Approx(0.5));  // B and C, not D
        CHECK(w.weights(0, 2) == doctest::Approx(0.5));
        CHECK(w.weights(0, 3) == 0.0);
    }
    SUBCASE("k = n is rejected") {
        CHECK_THROWS_AS(weights_knn(d, 6), Error);
        try {
            weights_knn(d, 0);
        } catch (const Error& e) {
            CHECK(e.code() == errc::bad_k);
        }
    }
}

TEST_CASE("distances are permutation-equivariant") {
    const ReturnPanel p = random_panel(5, 60, 13);
    ReturnPanel perm = p;
    const std::vector<int> order = {3, 1, 4, 0, 2};
    for (int i = 0; i < 5; ++i) {
        perm.tickers[i] = p.tickers[order[i]];
        perm.returns.row(i) = p.returns.row(order[i]);
    }
    const DistanceMatrix d0 = dist_euclidean(p), d1 = dist_euclidean(perm);
    const DistanceMatrix c0 = dist_correlation(p), c1 = dist_correlation(perm);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            CHECK(d1.d(i, j) == doctest::Approx(d0.d(order[i], order[j])).epsilon(1e-14));
            CHECK(c1.d(i, j) == doctest::Approx(c0.d(order[i], order[j])).epsilon(1e-12));
        }
}

TEST_CASE("scaling: euclidean is covariant, correlation invariant") {
    const ReturnPanel p = random_panel(4, 50, 17);
    ReturnPanel scaled = p;
    scaled.returns *= 3.5;
    const DistanceMatrix d0 = dist_euclidean(p), d1 = dist_euclidean(scaled);
    CHECK((d1.d - 3.5 * d0.d).cwiseAbs().maxCoeff() <= 1e-12);

    ReturnPanel per_stock = p;
    for (int i = 0; i < 4; ++i) per_stock.returns.row(i) *= (1.0 + i);
    const DistanceMatrix c0 = dist_correlation(p), c1 = dist_correlation(per_stock);
    CHECK((c1.d - c0.d).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("graphml edge counts") {
    auto count_edges = [](const std::string& xml) {
        size_t pos = 0, count = 0;
        while ((pos = xml.find("<edge ", pos)) != std::string::npos) {
            ++count;
            pos += 6;
        }
        return count;
    };

    const ReturnPanel big = random_panel(29, 50, 23);
    const EdgeWeightMatrix knn3 = weights_knn(dist_euclidean(big), 3);
    CHECK(count_edges(export_graphml(knn3, big.tickers)) == 29 * 3);

    const ReturnPanel small = random_panel(3, 30, 29);
    const EdgeWeightMatrix inv = weights_inverse_distance(dist_euclidean(small), true);
    CHECK(count_edges(export_graphml(inv, small.tickers)) == 6);

    EdgeWeightMatrix zero;
    zero.weights = Matrix::Zero(3, 3);
    CHECK(count_edges(export_graphml(zero, small.tickers)) == 0);
}

TEST_CASE("distance csv has a ticker header") {
    const ReturnPanel p = random_panel(3, 20, 31);
    const std::string csv = distance_csv(dist_euclidean(p));
    CHECK(csv.rfind("S00,S01,S02\n", 0) == 0);
}
