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

#include "aiqt/checkpoint.hpp"
#include "aiqt/circuit.hpp"
#include "aiqt/error.hpp"
#include "aiqt/encoding.hpp"
#include "aiqt/io.hpp"
#include "aiqt/qasm.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>

using namespace aiqt;
using namespace aiqt::test;

TEST_CASE("block gate counts") {
    for (std::size_t n = 1; n <= 8; ++n) {
        const GateCounts c = count_gates(block_circuit(fourier_init(n)));
        CHECK(c.single_qubit == n);
        CHECK(c.controlled_phase == n * (n - 1) / 2);
        CHECK(c.swaps == n / 2);
    }
    const GateCounts deep = count_gates(model_circuit(deep_init(5, 3, 1)));
    CHECK(deep.single_qubit == 15);
    CHECK(deep.controlled_phase == 30);
    CHECK(deep.swaps == 2);
}

TEST_CASE("circuit unitary agrees with the butterfly") {
    std::mt19937_64 rng(21);
    for (std::size_t n = 1; n <= 7; ++n) {
        const ParameterSet p = random_params(rng, n);
        const DenseMatrix u = dense_matrix(p);
        CHECK(unitarity_error(u) < 1e-10);
        for (int t = 0; t < 3; ++t) {
            const ComplexVector x = random_complex(rng, std::size_t{1} << n);
            CHECK(max_abs_diff(forward(x, p), matvec(u, x)) < 1e-9);
        }
    }
}

TEST_CASE("dense builders refuse oversized circuits") {
    QuantumCircuit c;
    c.qubits = kDenseQubitLimit + 1;
    CHECK_THROWS_AS((void)circuit_unitary(c), ResourceLimit);
}

TEST_CASE("fourier export on three qubits") {
    const TransformModel m(3, {fourier_init(3)});
    const std::string text = emit_qasm(m);
    CHECK(text.rfind("OPENQASM 2.0;", 0) == 0);
    const QuantumCircuit c = parse_qasm(text);
    CHECK(c.qubits == 3);
    const GateCounts counts = count_gates(c);
    CHECK(counts.single_qubit == 3);
    CHECK(counts.controlled_phase == 3);
    CHECK(counts.swaps == 1);

    std::vector<double> cp_angles;
    for (const Gate &g : c.gates) {
        if (g.kind == GateKind::U3) {
            CHECK(g.a == doctest::Approx(kPi / 2));
            CHECK(g.b == doctest::Approx(0.0));
            CHECK(g.c == doctest::Approx(kPi));
        } else if (g.kind == GateKind::ControlledPhase) {
            cp_angles.push_back(g.a);
        }
    }
    std::sort(cp_angles.begin(), cp_angles.end());
    REQUIRE(cp_angles.size() == 3);
    CHECK(cp_angles[0] == doctest::Approx(-kPi / 2));
    CHECK(cp_angles[1] == doctest::Approx(-kPi / 2));
    CHECK(cp_angles[2] == doctest::Approx(-kPi / 4));
    CHECK(qasm_deviation(text, m) < 1e-12);
}

TEST_CASE("zero-angle export rebuilds the reversal and stacks to the identity") {
    // a lone zero block is the output reversal; two of them cancel it only
    // when the reversal is applied twice, which a model never does
    const TransformModel one(3, {identity_init(3)});
    const DenseMatrix u = circuit_unitary(parse_qasm(emit_qasm(one)));
    CHECK((u - dense_matrix(identity_init(3))).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((u * u - DenseMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
    const TransformModel inner(3, {fourier_init(3), identity_init(3)});
    CHECK((circuit_unitary(parse_qasm(emit_qasm(inner))) - dft_matrix(8)).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("random model export round trip") {
    std::mt19937_64 rng(22);
    for (std::size_t depth = 1; depth <= 2; ++depth) {
        const TransformModel m = random_model(rng, 4, depth);
        CHECK(qasm_deviation(emit_qasm(m), m) < 1e-9);
    }
}

TEST_CASE("qasm reader aliases and errors") {
    const std::string aliases = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\n"
                                "h q[0];\nu1(pi/2) q[1];\ncu1(-pi/4) q[0],q[1];\n"
                                "cp(0.5) q[1],q[0];\nswap q[0],q[1];\n";
    const QuantumCircuit c = parse_qasm(aliases);
    CHECK(c.gates.size() == 5);
    CHECK(c.gates[2].kind == GateKind::ControlledPhase);
    CHECK(c.gates[2].a == doctest::Approx(-kPi / 4));

    CHECK_THROWS_AS((void)parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\n"), IoError);
    CHECK_THROWS_AS((void)parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[5];\n"), IoError);
    CHECK_THROWS_AS((void)parse_qasm("OPENQASM 2.0;\nh q[0];\n"), IoError);
}

TEST_CASE("export refuses a mismatching tolerance check") {
    const auto dir = std::filesystem::temp_directory_path() / "aiqt_qasm_test";
    std::filesystem::remove_all(dir);
    std::mt19937_64 rng(23);
    const TransformModel m = random_model(rng, 3, 1);
    export_qasm(m, dir / "c.qasm");
    CHECK(qasm_deviation(read_file(dir / "c.qasm"), m) < 1e-9);
    CHECK_THROWS_AS(export_qasm(m, dir / "d.qasm", -1.0), Error);
    CHECK_FALSE(std::filesystem::exists(dir / "d.qasm"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("checkpoint round trip is exact") {
    std::mt19937_64 rng(24);
    const TransformModel m = random_model(rng, 5, 2);
    const CheckpointMetadata meta{7, 12, 0.125};
    const Checkpoint back = checkpoint_from_json(nlohmann::json::parse(dump_checkpoint(m, meta)));
    CHECK(back.model == m);
    CHECK(back.metadata.seed == 7);
    CHECK(back.metadata.epoch == 12);
    REQUIRE(back.metadata.loss.has_value());
    CHECK(*back.metadata.loss == 0.125);

    const auto path = std::filesystem::temp_directory_path() / "aiqt_ckpt_test.json";
    save_checkpoint(path, m, meta);
    CHECK(load_checkpoint(path).model == m);
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint reader rejects malformed documents") {
    nlohmann::json j = to_json(fourier_model(3), {});
    SUBCASE("wrong version") { j["format_version"] = 99; }
    SUBCASE("missing blocks") { j.erase("blocks"); }
    SUBCASE("phase count mismatch") { j["blocks"][0]["phases"].push_back(0.0); }
    SUBCASE("depth mismatch") { j["depth"] = 2; }
    CHECK_THROWS_AS((void)checkpoint_from_json(j), IoError);
    CHECK_THROWS_AS((void)load_checkpoint("/nonexistent/ckpt.json"), IoError);
}
