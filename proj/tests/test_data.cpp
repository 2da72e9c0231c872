#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "ksup/data.hpp"
#include "ksup/errors.hpp"
#include "ksup/rng.hpp"
#include "support/test_oracles.hpp"

using ksup::Dataset;
using ksup::DatasetKind;
using ksup::load_csv;
using ksup::load_svmlight;
using ksup::Matrix;
using ksup::Rng;
using ksup::SyntheticSpec;
using ksup::Vector;
namespace oracle = ksup::testing;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path(fs::temp_directory_path() / name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.string().c_str()); }
};

} // namespace

TEST_CASE("load_csv parses a table with header and trailing label") {
    TempFile f("ksup_basic.csv", "a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
    const Dataset data = load_csv(f.path.string(), true);
    CHECK(data.n() == 3);
    CHECK(data.d() == 2);
    CHECK(data.X(1, 1) == 5.0);
    CHECK(data.y[2] == 9.0);
    CHECK(data.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(data.kind == DatasetKind::regression);
}

TEST_CASE("load_csv resolves the label column by name and index") {
    TempFile f("ksup_label.csv", "y,a,b\n1,2,3\n-1,5,6\n");
    const Dataset by_name = load_csv(f.path.string(), true, "y");
    CHECK(by_name.y[0] == 1.0);
    CHECK(by_name.y[1] == -1.0);
    CHECK(by_name.X(0, 0) == 2.0);
    CHECK(by_name.kind == DatasetKind::binary);

    const Dataset by_index = load_csv(f.path.string(), true, "0");
    CHECK(by_index.y[0] == 1.0);
    CHECK(by_index.X(0, 1) == 3.0);

    CHECK_THROWS_AS(load_csv(f.path.string(), true, "missing"),
                    ksup::ValidationError);
}

TEST_CASE("load_csv rejects malformed input with a location") {
    TempFile na("ksup_na.csv", "a,y\n1,2\nNA,4\n");
    try {
        load_csv(na.path.string(), true);
        FAIL("expected a parse error");
    } catch (const ksup::IoError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("column 1") != std::string::npos);
    }

    TempFile ragged("ksup_ragged.csv", "a,b,y\n1,2,3\n4,5\n");
    CHECK_THROWS_AS(load_csv(ragged.path.string(), true), ksup::IoError);

    TempFile empty("ksup_empty.csv", "");
    CHECK_THROWS_AS(load_csv(empty.path.string(), true), ksup::IoError);

    CHECK_THROWS_AS(load_csv("/nonexistent/path.csv", false), ksup::IoError);
}

TEST_CASE("csv round-trip preserves values") {
    Rng rng(61);
    Dataset data;
    data.X = oracle::random_matrix(rng, 12, 5, 3.0);
    data.y = oracle::random_vector(rng, 12, 2.0);
    const fs::path path = fs::temp_directory_path() / "ksup_roundtrip.csv";
    ksup::save_csv(data, path.string());
    const Dataset back = load_csv(path.string(), true);
    std::remove(path.string().c_str());

    REQUIRE(back.n() == data.n());
    REQUIRE(back.d() == data.d());
    for (ksup::Index i = 0; i < data.n(); ++i) {
        for (ksup::Index j = 0; j < data.d(); ++j) {
            CHECK(back.X(i, j) ==
                  doctest::Approx(data.X(i, j)).epsilon(1e-15));
        }
        CHECK(back.y[i] == doctest::Approx(data.y[i]).epsilon(1e-15));
    }
}

TEST_CASE("load_svmlight parses sparse rows") {
    TempFile f("ksup_sv.txt", "1 1:0.5 3:2\n-1 2:1\n");
    const Dataset data = load_svmlight(f.path.string());
    CHECK(data.n() == 2);
    CHECK(data.d() == 3);
    CHECK(data.X(0, 0) == 0.5);
    CHECK(data.X(0, 1) == 0.0);
    CHECK(data.X(0, 2) == 2.0);
    CHECK(data.X(1, 1) == 1.0);
    CHECK(data.kind == DatasetKind::binary);
    CHECK(data.y[0] == 1.0);
    CHECK(data.y[1] == -1.0);
}

TEST_CASE("load_svmlight maps two distinct labels, smaller to -1") {
    TempFile f("ksup_sv01.txt", "0 1:1\n1 1:2\n0 2:1\n");
    const Dataset data = load_svmlight(f.path.string());
    CHECK(data.kind == DatasetKind::binary);
    CHECK(data.y[0] == -1.0);
    CHECK(data.y[1] == 1.0);
    CHECK(data.y[2] == -1.0);
}

TEST_CASE("load_svmlight keeps other label sets as regression") {
    TempFile f("ksup_svreg.txt", "0.5 1:1\n1.5 1:2\n2.5 2:1\n");
    const Dataset data = load_svmlight(f.path.string());
    CHECK(data.kind == DatasetKind::regression);
    CHECK(data.y[2] == 2.5);
}

TEST_CASE("load_svmlight rejects malformed lines with their number") {
    TempFile dup("ksup_svdup.txt", "1 1:1 1:2\n");
    try {
        load_svmlight(dup.path.string());
        FAIL("expected an error");
    } catch (const ksup::IoError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }

    TempFile desc("ksup_svdesc.txt", "1 1:1\n1 3:1 2:1\n");
    try {
        load_svmlight(desc.path.string());
        FAIL("expected an error");
    } catch (const ksup::IoError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    TempFile pair("ksup_svpair.txt", "1 1:1 junk\n");
    CHECK_THROWS_AS(load_svmlight(pair.path.string()), ksup::IoError);
}

TEST_CASE("standardize centers train and flags constant features") {
    Rng rng(62);
    Dataset train;
    train.X = oracle::random_matrix(rng, 40, 4, 2.0);
    train.X.col(2).setConstant(7.0); // constant feature
    train.y = oracle::random_vector(rng, 40);

    Dataset other = train;
    other.X = oracle::random_matrix(rng, 10, 4, 2.0);
    other.y = oracle::random_vector(rng, 10);

    const ksup::Standardization st = ksup::standardize(train, {other});
    REQUIRE(st.datasets.size() == 2);
    CHECK(st.zero_variance == std::vector<bool>{false, false, true, false});
    CHECK(st.datasets[0].X.col(2).isZero(0.0));
    CHECK(st.datasets[1].X.col(2).isZero(0.0));

    for (ksup::Index j = 0; j < 4; ++j) {
        if (j == 2) {
            continue;
        }
        const double mean = st.datasets[0].X.col(j).mean();
        CHECK(std::abs(mean) <= 1e-12);
        const ksup::Index n = train.n();
        const double sd = std::sqrt(
            (st.datasets[0].X.col(j).array() - mean).square().sum() /
            static_cast<double>(n - 1));
        CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
    }

    // idempotence: standardizing standardized data changes nothing
    const ksup::Standardization st2 = ksup::standardize(st.datasets[0]);
    for (ksup::Index i = 0; i < train.n(); ++i) {
        for (ksup::Index j = 0; j < 4; ++j) {
            CHECK(st2.datasets[0].X(i, j) ==
                  doctest::Approx(st.datasets[0].X(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("split is deterministic, disjoint, and size-checked") {
    Rng rng(63);
    Dataset data;
    data.X = oracle::random_matrix(rng, 20, 3);
    data.y = oracle::random_vector(rng, 20);
    for (ksup::Index i = 0; i < 20; ++i) {
        data.X(i, 0) = static_cast<double>(i); // row tag
    }

    const ksup::SplitSizes sizes{10, 4, 6};
    const ksup::SplitResult a = ksup::split(data, sizes, 7);
    const ksup::SplitResult b = ksup::split(data, sizes, 7);
    CHECK((a.train.X - b.train.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.val.X - b.val.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.test.X - b.test.X).cwiseAbs().maxCoeff() == 0.0);

    std::vector<int> seen(20, 0);
    for (const Dataset* part : {&a.train, &a.val, &a.test}) {
        for (ksup::Index i = 0; i < part->n(); ++i) {
            seen[static_cast<std::size_t>(part->X(i, 0))] += 1;
        }
    }
    for (int count : seen) {
        CHECK(count == 1);
    }

    const ksup::SplitResult all = ksup::split(data, {20, 0, 0}, 9);
    CHECK(all.train.n() == 20);
    CHECK(all.val.n() == 0);

    CHECK_THROWS_AS(ksup::split(data, {15, 5, 1}, 1), ksup::ValidationError);
}

TEST_CASE("synthetic_generate matches the protocol shape") {
    SyntheticSpec spec;
    spec.seed = 5;
    const ksup::SyntheticData data = ksup::synthetic_generate(spec);
    CHECK(data.train.n() == 50);
    CHECK(data.val.n() == 50);
    CHECK(data.test.n() == 350);
    CHECK(data.train.d() == 40);
    for (int j = 0; j < 15; ++j) {
        CHECK(data.w_star[j] == 3.0);
    }
    for (int j = 15; j < 40; ++j) {
        CHECK(data.w_star[j] == 0.0);
    }
}

TEST_CASE("synthetic_generate is bitwise deterministic in the seed") {
    SyntheticSpec spec;
    spec.seed = 123;
    const ksup::SyntheticData a = ksup::synthetic_generate(spec);
    const ksup::SyntheticData b = ksup::synthetic_generate(spec);
    CHECK((a.train.X - b.train.X).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.test.y - b.test.y).cwiseAbs().maxCoeff() == 0.0);

    spec.seed = 124;
    const ksup::SyntheticData c = ksup::synthetic_generate(spec);
    CHECK((a.train.X - c.train.X).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("zero within-group noise collapses each group per row") {
    SyntheticSpec spec;
    spec.within_group_noise_sd = 0.0;
    spec.seed = 8;
    const ksup::SyntheticData data = ksup::synthetic_generate(spec);
    for (ksup::Index i = 0; i < data.train.n(); ++i) {
        for (int g = 0; g < 3; ++g) {
            for (int j = 1; j < 5; ++j) {
                CHECK(data.train.X(i, g * 5 + j) == data.train.X(i, g * 5));
            }
        }
    }
}

TEST_CASE("population covariance is the documented block matrix") {
    SyntheticSpec spec;
    spec.within_group_noise_sd = 0.1;
    const Matrix V = ksup::population_covariance(spec);
    CHECK(V(0, 0) == doctest::Approx(1.01));
    CHECK(V(0, 4) == doctest::Approx(1.0));
    CHECK(V(0, 5) == 0.0);
    CHECK(V(6, 9) == doctest::Approx(1.0));
    CHECK(V(20, 20) == 1.0);
    CHECK(V(20, 21) == 0.0);

    SyntheticSpec unit;
    unit.within_group_noise_sd = 1.0;
    CHECK(ksup::population_covariance(unit)(0, 0) == doctest::Approx(2.0));

    CHECK((V - Matrix(V.transpose())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(oracle::max_eigenvalue(-V) <= 1e-10); // eigenvalues >= -1e-10
}

TEST_CASE("empirical covariance of many rows approaches the analytic V") {
    SyntheticSpec spec;
    spec.n_train = 1;
    spec.n_val = 0;
    spec.n_test = 100000;
    spec.seed = 77;
    const ksup::SyntheticData data = ksup::synthetic_generate(spec);
    const Matrix& X = data.test.X;
    const Vector mean = X.colwise().mean();
    const Matrix centered = X.rowwise() - mean.transpose();
    const Matrix emp =
        centered.transpose() * centered / static_cast<double>(X.rows() - 1);
    const Matrix V = ksup::population_covariance(spec);
    CHECK((emp - V).cwiseAbs().maxCoeff() <= 2e-2);
}

TEST_CASE("dataset and spec validation") {
    Dataset bad;
    bad.X = Matrix::Zero(2, 2);
    bad.y = Vector::Zero(3);
    CHECK_THROWS_AS(ksup::validate(bad), ksup::ValidationError);

    Dataset nanny;
    nanny.X = Matrix::Zero(2, 2);
    nanny.y = Vector::Zero(2);
    nanny.X(0, 0) = std::nan("");
    CHECK_THROWS_AS(ksup::validate(nanny), ksup::ValidationError);

    SyntheticSpec spec;
    spec.group_size = 21; // 3 * 21 > 40
    CHECK_THROWS_AS(ksup::validate(spec), ksup::ValidationError);
}
