#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "egda/scatter.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace egda;

TEST_CASE("one sample per class gives a zero scatter matrix") {
    DomainDataset source{Eigen::MatrixXd::Constant(3, 1, 7.0), Eigen::VectorXi::Zero(1), 1};
    CHECK(build_sw(source).isZero(0.0));
}

TEST_CASE("two symmetric points give scatter 2 in one dimension") {
    Eigen::MatrixXd x(1, 2);
    x << -1, 1;
    DomainDataset source{x, Eigen::VectorXi::Zero(2), 1};
    Eigen::MatrixXd sw = build_sw(source);
    CHECK(sw(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("two-class worked example gives diag(2, 2)") {
    Eigen::MatrixXd x(2, 4);
    x << 0, 2, 0, 0,
         0, 0, 1, 3;
    Eigen::VectorXi y(4);
    y << 0, 0, 1, 1;
    DomainDataset source{x, y, 2};
    Eigen::MatrixXd sw = build_sw(source);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
    expected(0, 0) = 2.0;
    expected(1, 1) = 2.0;
    CHECK((sw - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("build_sw requires labels and tolerates empty classes") {
    DomainDataset unlabeled{Eigen::MatrixXd::Zero(2, 2), std::nullopt, 2};
    CHECK_THROWS_AS(build_sw(unlabeled), std::invalid_argument);

    // class 1 empty: contributes nothing
    DomainDataset sparse{Eigen::MatrixXd::Random(2, 3), Eigen::VectorXi::Zero(3), 2};
    CHECK_NOTHROW(build_sw(sparse));
}

TEST_CASE("scatter matches the brute-force double loop") {
    testutil::Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index d = rng.uniform_int(1, 10);
        const Eigen::Index n = rng.uniform_int(2, 50);
        const int classes = rng.uniform_int(1, 4);
        DomainDataset source{rng.matrix(d, n, -3, 3), rng.labels(n, classes), classes};
        Eigen::MatrixXd sw = build_sw(source);
        Eigen::MatrixXd reference =
            oracle::scatter_direct_oracle(source.features, *source.labels, classes);
        CHECK((sw - reference).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("scatter is positive semidefinite") {
    testutil::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = rng.uniform_int(1, 10);
        const Eigen::Index n = rng.uniform_int(2, 50);
        DomainDataset source{rng.matrix(d, n, -3, 3), rng.labels(n, 3), 3};
        Eigen::MatrixXd sw = build_sw(source);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sw);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("scatter is invariant to translating a whole class") {
    testutil::Rng rng(47);
    DomainDataset source{rng.matrix(4, 20, -2, 2), rng.labels(20, 3), 3};
    Eigen::MatrixXd before = build_sw(source);

    Eigen::VectorXd offset = rng.vector(4, -5, 5);
    DomainDataset shifted = source;
    for (Eigen::Index i = 0; i < shifted.size(); ++i)
        if ((*shifted.labels)(i) == 1) shifted.features.col(i) += offset;
    Eigen::MatrixXd after = build_sw(shifted);
    CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("scatter_trace worked examples and brute force") {
    Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(2, 2);
    sw(0, 0) = sw(1, 1) = 2.0;
    CHECK(scatter_trace(Eigen::MatrixXd::Identity(2, 2), sw) == doctest::Approx(4.0));
    CHECK(scatter_trace(Eigen::MatrixXd::Zero(2, 2), sw) == 0.0);
    CHECK_THROWS_AS(scatter_trace(Eigen::MatrixXd::Zero(3, 2), sw), std::invalid_argument);

    // trace form == sum of squared projected deviations
    testutil::Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index d = 5, n = 24;
        const int classes = 3;
        DomainDataset source{rng.matrix(d, n, -2, 2), rng.labels(n, classes), classes};
        Eigen::MatrixXd a = rng.matrix(d, 3);
        double direct = 0.0;
        for (int c = 0; c < classes; ++c) {
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
            int count = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                if ((*source.labels)(i) == c) {
                    mean += source.features.col(i);
                    ++count;
                }
            if (count == 0) continue;
            mean /= count;
            for (Eigen::Index i = 0; i < n; ++i)
                if ((*source.labels)(i) == c)
                    direct += (a.transpose() * (source.features.col(i) - mean)).squaredNorm();
        }
        CHECK(scatter_trace(a, build_sw(source)) == doctest::Approx(direct).epsilon(1e-10));
    }
}
