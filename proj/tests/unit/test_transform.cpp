// Copyright 2026 The AIQT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aiqt/circuit.hpp"
#include "aiqt/encoding.hpp"
#include "aiqt/error.hpp"
#include "aiqt/transform.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <chrono>

using namespace aiqt;
using namespace aiqt::test;

namespace {

// Direct O(N^2) unitary DFT with kernel exp(-2 pi i j l / N).
ComplexVector naive_dft(std::span<const Complex> x) {
    const std::size_t n = x.size();
    ComplexVector y(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t l = 0; l < n; ++l) {
            const double ang = -2.0 * kPi * static_cast<double>((j * l) % n) /
                               static_cast<double>(n);
            acc += x[l] * std::polar(1.0, ang);
        }
        y[j] = acc / std::sqrt(static_cast<double>(n));
    }
    return y;
}

std::size_t reverse_bits(std::size_t i, std::size_t n) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < n; ++b) {
        r |= ((i >> b) & 1U) << (n - 1 - b);
    }
    return r;
}

double matrix_diff(const Matrix2 &a, const Matrix2 &b) {
    double m = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            m = std::max(m, std::abs(a[r][c] - b[r][c]));
        }
    }
    return m;
}

} // namespace

TEST_CASE("u3 matrix at reference angles") {
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(matrix_diff(u3_matrix(kPi / 2, 0, kPi), Matrix2{{{s, s}, {s, -s}}}) < 1e-15);
    CHECK(matrix_diff(u3_matrix(0, 0, 0), Matrix2{{{1, 0}, {0, 1}}}) == 0.0);
    CHECK(matrix_diff(u3_matrix(kPi, 0, 0), Matrix2{{{0, -1}, {1, 0}}}) < 1e-15);
}

TEST_CASE("u3 matrix rejects non-finite angles") {
    CHECK_THROWS_AS((void)u3_matrix(std::nan(""), 0, 0), InvalidArgument);
    CHECK_THROWS_AS((void)u3_matrix(0, INFINITY, 0), InvalidArgument);
}

TEST_CASE("u3 matrix is unitary for random angles") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ang(-10, 10);
    for (int t = 0; t < 50; ++t) {
        const Matrix2 u = u3_matrix(ang(rng), ang(rng), ang(rng));
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                Complex dot = std::conj(u[0][a]) * u[0][b] + std::conj(u[1][a]) * u[1][b];
                CHECK(std::abs(dot - Complex(a == b ? 1.0 : 0.0)) < 1e-14);
            }
        }
    }
}

TEST_CASE("parameter counts and packing") {
    for (std::size_t n = 1; n <= 12; ++n) {
        ParameterSet p(n);
        CHECK(p.mixers().size() == n);
        CHECK(p.phases().size() == n * (n - 1) / 2);
        CHECK(p.parameter_count() == 3 * n + n * (n - 1) / 2);
        for (std::size_t L = 1; L < n; ++L) {
            CHECK(p.level(L).size() == L);
        }
    }
    CHECK_THROWS_AS(ParameterSet(0), InvalidArgument);
    CHECK_THROWS_AS(ParameterSet(31), InvalidArgument);
}

TEST_CASE("flatten and assign round trip") {
    std::mt19937_64 rng(2);
    const TransformModel m = random_model(rng, 5, 3);
    TransformModel copy(5, {identity_init(5), identity_init(5), identity_init(5)});
    copy.assign_from(m.flatten());
    CHECK(copy == m);
    CHECK(m.flatten().size() == m.parameter_count());
    const std::vector<double> wrong(m.parameter_count() + 1, 0.0);
    CHECK_THROWS_AS(copy.assign_from(wrong), InvalidArgument);
}

TEST_CASE("fourier init angles") {
    const ParameterSet p1 = fourier_init(1);
    CHECK(p1.mixers().size() == 1);
    CHECK(p1.mixers()[0] == MixerAngles{kPi / 2, 0, kPi});
    CHECK(p1.phases().empty());

    const ParameterSet p3 = fourier_init(3);
    REQUIRE(p3.phases().size() == 3);
    CHECK(p3.phases()[0] == doctest::Approx(-kPi / 2));
    CHECK(p3.phases()[1] == doctest::Approx(-kPi / 4));
    CHECK(p3.phases()[2] == doctest::Approx(-kPi / 2));
    CHECK_THROWS_AS((void)fourier_init(0), InvalidArgument);
    CHECK_THROWS_AS((void)identity_init(0), InvalidArgument);
}

TEST_CASE("dft oracle reference values") {
    const ComplexVector delta{1, 0, 0, 0};
    const ComplexVector y = dft_oracle(delta);
    for (const auto &v : y) {
        CHECK(std::abs(v - Complex(0.5, 0)) < 1e-15);
    }
    const ComplexVector ones{1, 1, 1, 1};
    CHECK(max_abs_diff(dft_oracle(ones), ComplexVector{2, 0, 0, 0}) < 1e-15);

    std::mt19937_64 rng(3);
    const ComplexVector x = random_complex(rng, 64);
    CHECK(norm2(dft_oracle(x)) == doctest::Approx(norm2(x)).epsilon(1e-13));
    CHECK(max_abs_diff(dft_oracle(x), naive_dft(x)) < 1e-12);
}

TEST_CASE("forward at fourier init reproduces the unitary DFT") {
    std::mt19937_64 rng(4);
    for (std::size_t n = 1; n <= 10; ++n) {
        const ParameterSet p = fourier_init(n);
        const ComplexVector x = random_complex(rng, std::size_t{1} << n);
        CHECK(max_abs_diff(forward(x, p), naive_dft(x)) < 1e-10);
    }
    // delta at index 0 maps to the uniform vector
    ComplexVector e0(16, 0.0);
    e0[0] = 1.0;
    const ComplexVector y = forward(e0, fourier_init(4));
    for (const auto &v : y) {
        CHECK(std::abs(v - Complex(0.25, 0)) < 1e-15);
    }
}

TEST_CASE("dense matrix at fourier init equals the DFT matrix") {
    CHECK((dense_matrix(fourier_init(2)) - dft_matrix(4)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((dense_matrix(fourier_model(6)) - dft_matrix(64)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero angles: identity inside a model, bit reversal alone") {
    std::mt19937_64 rng(5);
    const ComplexVector x = random_complex(rng, 8);
    const TransformModel stacked(3, {identity_init(3), identity_init(3)});
    // two zero blocks in a model: C_2 C_1 = I, then the output reversal
    ComplexVector reversed(8);
    for (std::size_t i = 0; i < 8; ++i) {
        reversed[i] = x[reverse_bits(i, 3)];
    }
    CHECK(max_abs_diff(forward(x, identity_init(3)), reversed) == 0.0);
    CHECK(max_abs_diff(inverse(x, identity_init(3)), reversed) == 0.0);
    CHECK(max_abs_diff(deep_forward(x, stacked), reversed) == 0.0);

    DenseMatrix perm = DenseMatrix::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) {
        perm(i, static_cast<Eigen::Index>(reverse_bits(static_cast<std::size_t>(i), 3))) = 1.0;
    }
    CHECK((dense_matrix(identity_init(3)) - perm).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero-angle blocks leave a model unchanged") {
    std::mt19937_64 rng(10);
    const ParameterSet p = random_params(rng, 4);
    const ComplexVector x = random_complex(rng, 16);
    const ComplexVector ref = forward(x, p);
    const TransformModel after(4, {p, identity_init(4)});
    const TransformModel before(4, {identity_init(4), p});
    const TransformModel both(4, {identity_init(4), p, identity_init(4)});
    CHECK(max_abs_diff(deep_forward(x, after), ref) < 1e-15);
    CHECK(max_abs_diff(deep_forward(x, before), ref) < 1e-15);
    CHECK(max_abs_diff(deep_forward(x, both), ref) < 1e-15);
    CHECK(max_abs_diff(deep_inverse(ref, both), x) < 1e-14);
}

TEST_CASE("forward preserves the norm and inverse undoes it") {
    std::mt19937_64 rng(6);
    for (std::size_t n = 1; n <= 9; ++n) {
        const ParameterSet p = random_params(rng, n);
        const ComplexVector x = random_complex(rng, std::size_t{1} << n);
        const ComplexVector y = forward(x, p);
        CHECK(std::abs(norm2(y) - norm2(x)) < 1e-12 * std::max(1.0, norm2(x)));
        CHECK(max_abs_diff(inverse(y, p), x) < 1e-10);
    }
}

TEST_CASE("inverse at fourier init is the inverse DFT") {
    std::mt19937_64 rng(7);
    const ComplexVector y = random_complex(rng, 32);
    const DenseMatrix finv = dft_matrix(32).adjoint();
    CHECK(max_abs_diff(inverse(y, fourier_init(5)), matvec(finv, y)) < 1e-12);
}

TEST_CASE("forward rejects bad lengths") {
    const ComplexVector x(6, 1.0);
    CHECK_THROWS_AS((void)forward(x, fourier_init(3)), InvalidArgument);
    const ComplexVector y(16, 1.0);
    CHECK_THROWS_AS((void)forward(y, fourier_init(3)), InvalidArgument);
    CHECK_THROWS_AS((void)inverse(y, fourier_init(3)), InvalidArgument);
}

TEST_CASE("deep models") {
    std::mt19937_64 rng(8);
    const ComplexVector x = random_complex(rng, 16);
    SUBCASE("one block equals forward") {
        const ParameterSet p = random_params(rng, 4);
        CHECK(max_abs_diff(deep_forward(x, TransformModel(4, {p})), forward(x, p)) == 0.0);
    }
    SUBCASE("trailing identity block changes nothing") {
        const TransformModel m(4, {fourier_init(4), identity_init(4)});
        CHECK(max_abs_diff(deep_forward(x, m), forward(x, fourier_init(4))) < 1e-15);
    }
    SUBCASE("three random blocks match the dense product") {
        const TransformModel m = random_model(rng, 4, 3);
        const DenseMatrix u = dense_matrix(m);
        CHECK(max_abs_diff(deep_forward(x, m), matvec(u, x)) < 1e-9);
        CHECK(max_abs_diff(deep_inverse(deep_forward(x, m), m), x) < 1e-10);
    }
    SUBCASE("mismatched blocks are rejected") {
        CHECK_THROWS_AS(TransformModel(4, {fourier_init(4), fourier_init(3)}), InvalidArgument);
        CHECK_THROWS_AS(TransformModel(4, {}), InvalidArgument);
        CHECK_THROWS_AS((void)deep_forward(ComplexVector(8, 1.0), TransformModel(4, {fourier_init(4)})),
                        InvalidArgument);
    }
}

TEST_CASE("deep init keeps extra blocks at the identity") {
    const TransformModel m = deep_init(6, 4, 11);
    CHECK(m.depth() == 4);
    CHECK(m.block(0) == fourier_init(6));
    bool perturbed = false;
    for (std::size_t d = 1; d < 4; ++d) {
        for (const auto &mx : m.block(d).mixers()) {
            CHECK(std::abs(mx.beta) <= 1e-2);
            perturbed = perturbed || mx.beta != 0.0;
        }
    }
    CHECK(perturbed);
    CHECK((dense_matrix(m) - dft_matrix(64)).cwiseAbs().maxCoeff() < 1e-12);
    std::mt19937_64 rng(12);
    const ComplexVector x = random_complex(rng, 64);
    CHECK(max_abs_diff(deep_forward(x, m), forward(x, fourier_init(6))) < 1e-14);
    CHECK(deep_init(6, 4, 11) == m);
    CHECK_FALSE(deep_init(6, 4, 12) == m);
}

TEST_CASE("forward runtime grows quasilinearly") {
    // Doubling N should cost well under 4x; compare N=2^14 and 2^15.
    std::mt19937_64 rng(9);
    auto time_forward = [&](std::size_t n) {
        const ParameterSet p = random_params(rng, n);
        ComplexVector x = random_complex(rng, std::size_t{1} << n);
        double best = 1e9;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            forward_in_place(x, p);
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };
    const double small = time_forward(14);
    const double large = time_forward(15);
    CHECK(large / small < 3.5);
}
