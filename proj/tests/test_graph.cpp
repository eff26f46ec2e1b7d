#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <limits>

#include "egda/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace egda;

TEST_CASE("project_to_simplex keeps feasible points and clamps vertices") {
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(5, 0.2);
    CHECK((project_to_simplex(uniform) - uniform).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::VectorXd v(2);
    v << 2, 0;
    Eigen::VectorXd u = project_to_simplex(v);
    CHECK(u(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u(1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("project_to_simplex matches the worked three-entry example") {
    Eigen::VectorXd v(3);
    v << 0.9, 0.5, -0.3;
    Eigen::VectorXd u = project_to_simplex(v);
    CHECK(u(0) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(u(1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(u(2) == 0.0);
}

TEST_CASE("project_to_simplex rejects non-finite input") {
    Eigen::VectorXd v(2);
    v << 1.0, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(project_to_simplex(v), std::invalid_argument);
}

TEST_CASE("project_to_simplex agrees with the active-set oracle") {
    testutil::Rng rng(61);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index n = rng.uniform_int(2, 10);
        Eigen::VectorXd v = rng.vector(n, -2, 2);
        Eigen::VectorXd fast = project_to_simplex(v);
        Eigen::VectorXd slow = oracle::qp_simplex_oracle(v);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(fast.minCoeff() >= 0.0);
        CHECK(fast.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("update_similarity becomes uniform for a huge gamma") {
    testutil::Rng rng(67);
    Eigen::MatrixXd z = rng.matrix(3, 6, -1, 1);
    SimilarityGraph graph = update_similarity(z, 1e12);
    CHECK((graph.s.array() - 1.0 / 6).abs().maxCoeff() < 1e-6);
}

TEST_CASE("update_similarity splits evenly between identical points") {
    Eigen::MatrixXd z(2, 2);
    z << 1, 1, 2, 2;
    SimilarityGraph graph = update_similarity(z, 0.5);
    CHECK((graph.s.array() - 0.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("update_similarity rows solve the row-wise QP") {
    Eigen::MatrixXd z(1, 3);
    z << 0, 1, 3;
    const double gamma = 1.0;
    SimilarityGraph graph = update_similarity(z, gamma);
    for (Eigen::Index i = 0; i < 3; ++i) {
        Eigen::VectorXd distances(3);
        for (Eigen::Index j = 0; j < 3; ++j) distances(j) = (z.col(i) - z.col(j)).squaredNorm();
        Eigen::VectorXd expected = oracle::qp_simplex_oracle(-distances / (2.0 * gamma));
        CHECK((graph.s.row(i).transpose() - expected).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("update_similarity enforces monotone locality") {
    testutil::Rng rng(71);
    Eigen::MatrixXd z = rng.matrix(4, 12, -2, 2);
    SimilarityGraph graph = update_similarity(z, 0.7);
    for (Eigen::Index i = 0; i < z.cols(); ++i) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            for (Eigen::Index k = 0; k < z.cols(); ++k) {
                double dij = (z.col(i) - z.col(j)).squaredNorm();
                double dik = (z.col(i) - z.col(k)).squaredNorm();
                if (dij < dik) CHECK(graph.s(i, j) >= graph.s(i, k) - 1e-12);
            }
        }
    }
}

TEST_CASE("update_similarity keeps rows on the simplex and respects options") {
    testutil::Rng rng(73);
    Eigen::MatrixXd z = rng.matrix(3, 40, -1, 1);
    SimilarityGraph graph = update_similarity(z, 0.05);
    for (Eigen::Index i = 0; i < z.cols(); ++i) {
        CHECK(graph.s.row(i).minCoeff() >= 0.0);
        CHECK(graph.s.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    }

    GraphOptions zero_diag;
    zero_diag.zero_diagonal = true;
    SimilarityGraph no_self = update_similarity(z, 0.05, zero_diag);
    CHECK(no_self.s.diagonal().isZero(0.0));
    for (Eigen::Index i = 0; i < z.cols(); ++i)
        CHECK(no_self.s.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));

    GraphOptions threaded;
    threaded.threads = 4;
    SimilarityGraph parallel = update_similarity(z, 0.05, threaded);
    CHECK(parallel.s == graph.s);  // bit-identical regardless of threading
}

TEST_CASE("update_similarity rejects bad inputs") {
    Eigen::MatrixXd z(1, 2);
    z << 0, 1;
    CHECK_THROWS_AS(update_similarity(z, 0.0), std::invalid_argument);
    z(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(update_similarity(z, 1.0), std::invalid_argument);
}

TEST_CASE("build_laplacian worked examples") {
    SimilarityGraph ring;
    ring.s.resize(2, 2);
    ring.s << 0, 1, 1, 0;
    Eigen::MatrixXd expected(2, 2);
    expected << 1, -1, -1, 1;
    CHECK(build_laplacian(ring) == expected);

    SimilarityGraph self_loops;
    self_loops.s = Eigen::MatrixXd::Identity(3, 3);
    CHECK(build_laplacian(self_loops).isZero(0.0));
}

TEST_CASE("laplacian quadratic form equals the half pairwise sum") {
    testutil::Rng rng(79);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = rng.uniform_int(2, 6);
        SimilarityGraph graph;
        graph.s.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            graph.s.row(i) = project_to_simplex(rng.vector(n, 0, 1)).transpose();
        Eigen::MatrixXd laplacian = build_laplacian(graph);
        Eigen::MatrixXd w = 0.5 * (graph.s + graph.s.transpose());

        Eigen::VectorXd x = rng.vector(n, -2, 2);
        double direct = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                direct += w(i, j) * (x(i) - x(j)) * (x(i) - x(j));
        direct *= 0.5;
        CHECK(x.dot(laplacian * x) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("laplacian is PSD with zero row sums") {
    testutil::Rng rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = rng.uniform_int(2, 12);
        SimilarityGraph graph = update_similarity(rng.matrix(3, n, -1, 1), 0.3);
        Eigen::MatrixXd laplacian = build_laplacian(graph);
        CHECK(laplacian.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
        CHECK((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() < 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("graph_trace annihilates zero projections and identical columns") {
    Eigen::MatrixXd x(2, 2);
    x << 1, 1, 2, 2;
    SimilarityGraph graph = update_similarity(x, 1.0);
    Eigen::MatrixXd laplacian = build_laplacian(graph);
    CHECK(graph_trace(Eigen::MatrixXd::Zero(2, 1), x, laplacian) == 0.0);
    CHECK(graph_trace(Eigen::MatrixXd::Identity(2, 2), x, laplacian) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("graph_trace equals half the similarity-weighted pairwise sum") {
    testutil::Rng rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = rng.uniform_int(2, 8);
        const Eigen::Index d = rng.uniform_int(1, 5);
        Eigen::MatrixXd x = rng.matrix(d, n, -2, 2);
        Eigen::MatrixXd a = rng.matrix(d, 2);
        SimilarityGraph graph = update_similarity(x, 0.4);
        Eigen::MatrixXd laplacian = build_laplacian(graph);

        double direct = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                direct += graph.s(i, j) *
                          (a.transpose() * (x.col(i) - x.col(j))).squaredNorm();
        CHECK(graph_trace(a, x, laplacian) == doctest::Approx(0.5 * direct).epsilon(1e-9));
    }
}

TEST_CASE("graph_trace rejects mismatched shapes") {
    CHECK_THROWS_AS(graph_trace(Eigen::MatrixXd::Zero(2, 1), Eigen::MatrixXd::Zero(3, 4),
                                Eigen::MatrixXd::Zero(4, 4)),
                    std::invalid_argument);
}
