#include "qbound/errors.h"
#include "qbound/io.h"
#include "qbound/passes.h"
#include "qbound/simulator.h"
#include "support/fixtures.h"
#include "support/random_circuits.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace qbound;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

Json minimal() { return Json::parse(R"({"width": 2, "gates": [{"kind": "CX", "operands": [1, 2]}],
                                          "measurements": [[1, 1], [2, 2]]})"); }

}  // namespace

TEST(CircuitJson, FixturesMatchBuilders) {
    EXPECT_EQ(fixtures::load_fixture("example1"), fixtures::example1());
    EXPECT_EQ(fixtures::load_fixture("example2"), fixtures::example2());
    EXPECT_EQ(fixtures::load_fixture("example3"), fixtures::example3());
    EXPECT_EQ(fixtures::load_fixture("qft4"), fixtures::qft4());
    EXPECT_EQ(fixtures::load_fixture("si_example"), fixtures::si_example());
    EXPECT_EQ(fixtures::load_fixture("gate_cut"), fixtures::gate_cut());
    EXPECT_EQ(fixtures::load_fixture("wire_cut"), fixtures::wire_cut());
}

TEST(CircuitJson, RandomRoundTrip) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Circuit c = testgen::random_circuit(seed);
        Json j = circuit_to_json(c);
        EXPECT_EQ(circuit_from_json(j), c) << seed;
        std::string text = emit_json(j);
        EXPECT_EQ(emit_json(parse_json_text(text, "mem")), text);
    }
}

TEST(CircuitJson, OneBasedOperands) {
    Circuit c = circuit_from_json(minimal());
    ASSERT_EQ(c.gates.size(), 1u);
    EXPECT_EQ(c.gates[0], Gate::cx(0, 1));
    EXPECT_EQ(c.measurements[1].wire, 1u);
    Json back = circuit_to_json(c);
    EXPECT_EQ(back["gates"][0]["operands"], Json::array({1, 2}));
}

TEST(CircuitJson, ErrorsNameTheField) {
    Json j = minimal();
    j["gates"][0]["operands"] = Json::array({1, 0});
    EXPECT_NE(error_of([&] { circuit_from_json(j); }).find("gates[0].operands"), std::string::npos);

    j = minimal();
    j["gates"][0]["kind"] = "WIBBLE";
    EXPECT_NE(error_of([&] { circuit_from_json(j); }).find("gates[0].kind"), std::string::npos);

    j = minimal();
    j.erase("width");
    EXPECT_NE(error_of([&] { circuit_from_json(j); }).find("width"), std::string::npos);

    j = minimal();
    j["preparations"] = Json::array({0, 2});
    EXPECT_NE(error_of([&] { circuit_from_json(j); }).find("preparations[1]"), std::string::npos);

    j = minimal();
    j["measurements"][1] = Json::array({2});
    EXPECT_NE(error_of([&] { circuit_from_json(j); }).find("measurements[1]"), std::string::npos);
}

TEST(CircuitJson, ValidationFailuresAreInputErrors) {
    Json j = minimal();
    j["gates"][0]["operands"] = Json::array({1, 1});
    std::string msg = error_of([&] { circuit_from_json(j); });
    EXPECT_NE(msg.find("duplicate-operand"), std::string::npos) << msg;
    j = minimal();
    j["gates"][0]["operands"] = Json::array({1, 5});
    EXPECT_FALSE(error_of([&] { circuit_from_json(j); }).empty());
}

TEST(StageJson, RoundTrip) {
    ClassicalStage d = ClassicalStage::deterministic_on(3, {0, 2}, {0, 3, 2, 1});
    EXPECT_EQ(stage_from_json(stage_to_json(d)), d);
    EXPECT_EQ(stage_to_json(d)["support"], Json::array({1, 3}));
    RealMatrix m(2, 2);
    m << 0.25, 0.5, 0.75, 0.5;
    ClassicalStage s = ClassicalStage::stochastic_on(2, {1}, m);
    EXPECT_EQ(stage_from_json(stage_to_json(s)), s);
}

TEST(StageJson, BadStagesRejected) {
    Json j = stage_to_json(ClassicalStage::deterministic_on(2, {0}, {1, 0}));
    j["table"] = Json::array({0, 7});
    EXPECT_THROW(stage_from_json(j), InputError);
    j = stage_to_json(ClassicalStage::deterministic_on(2, {0}, {1, 0}));
    j["table"][0] = -1;
    EXPECT_NE(error_of([&] { stage_from_json(j); }).find("table[0]"), std::string::npos);
    RealMatrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    j = stage_to_json(ClassicalStage::stochastic_on(1, {0}, m));
    j["matrix"][0][0] = 0.9;
    EXPECT_THROW(stage_from_json(j), InputError);
    j["kind"] = "quantum";
    EXPECT_THROW(stage_from_json(j), InputError);
}

TEST(ProgramJson, RoundTripAfterPipeline) {
    PipelineOptions o;
    o.passes = parse_pass_list("all");
    for (const Circuit& c : {fixtures::si_example(), fixtures::example1(), fixtures::example3()}) {
        HybridProgram p = simplify_pipeline(c, o).program;
        Json j = program_to_json(p);
        HybridProgram back = program_from_json(j);
        EXPECT_EQ(back.circuit, p.circuit);
        EXPECT_EQ(back.output_wires, p.output_wires);
        EXPECT_EQ(back.post_stages, p.post_stages);
        EXPECT_EQ(back.input_premap.has_value(), p.input_premap.has_value());
        EXPECT_EQ(back.scale, p.scale);
        EXPECT_EQ(emit_json(program_to_json(back)), emit_json(j));
        for (Index x = 0; x < (Index{1} << c.width); ++x) {
            if (p.input_premap) break;
            EXPECT_EQ(run_hybrid_exact(back, BasisState(c.width, x)), run_hybrid_exact(p, BasisState(c.width, x)));
        }
    }
}

TEST(ProgramJson, AcceptsBareCircuit) {
    HybridProgram p = program_from_json(circuit_to_json(fixtures::example1()));
    EXPECT_EQ(p.circuit, fixtures::example1());
    EXPECT_TRUE(p.post_stages.empty());
    EXPECT_EQ(p.scale, 1.0);
}

TEST(ProgramJson, StageWidthMustMatchWires) {
    Circuit c(2);
    c.measure_all();
    HybridProgram p = HybridProgram::from_circuit(c);
    p.post_stages.push_back(ClassicalStage::deterministic(2, {0, 1, 2, 3}));
    Json j = program_to_json(p);
    j["post_stages"][0]["width"] = 3;
    j["post_stages"][0]["table"] = Json::array({0, 1, 2, 3, 4, 5, 6, 7});
    EXPECT_THROW(program_from_json(j), InputError);
}

TEST(JsonText, SyntaxErrorsReportPosition) {
    std::string msg = error_of([] { parse_json_text("{\n  \"width\": ,\n}", "broken.json"); });
    EXPECT_NE(msg.find("broken.json"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(JsonText, EmitIsSortedAndStable) {
    Json j = Json::parse(R"({"b": 0.1, "a": [1, 2]})");
    std::string text = emit_json(j);
    EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
    EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
    EXPECT_EQ(emit_json(Json::parse(text)), text);
}

TEST(Files, WriteReadRoundTrip) {
    auto path = std::filesystem::temp_directory_path() / "qbound_io_test.json";
    HybridProgram p = HybridProgram::from_circuit(fixtures::qft4());
    emit_hybrid_program(p, path.string());
    HybridProgram back = load_program_file(path.string());
    EXPECT_EQ(back.circuit, p.circuit);
    EXPECT_THROW(parse_circuit_file(path.string()), InputError);
    write_text_file(path.string(), emit_json(circuit_to_json(fixtures::qft4())));
    EXPECT_EQ(parse_circuit_file(path.string()), fixtures::qft4());
    std::filesystem::remove(path);
    EXPECT_THROW(read_json_file(path.string()), InputError);
}
