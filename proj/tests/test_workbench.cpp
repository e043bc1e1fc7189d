#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

using namespace vtcp;
using namespace vtcp::test;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("vtcp_test_" + name)).string();
}

std::string instance_text(const VtcpInstance& inst) { return instance_to_json(inst).dump(2); }

} // namespace

// --- instance files -------------------------------------------------------------------

TEST(InstanceIo, RoundTripExample42) {
    const VtcpInstance inst = find_example("4.2").instance();
    const std::string path = temp_path("rt42.json");
    save_instance(inst, path, "example 4.2");
    const InstanceFile back = load_instance_file(path);
    EXPECT_EQ(back.instance.pair(), inst.pair());
    EXPECT_EQ(back.instance.q1(), inst.q1());
    EXPECT_EQ(back.instance.q2(), inst.q2());
    EXPECT_EQ(back.name, "example 4.2");
    std::remove(path.c_str());
}

TEST(InstanceIo, RoundTripIsBitExact) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const VtcpInstance inst = generate(GenerateKind::RandomDensePair, 3, 3, seed);
        const InstanceFile back = parse_instance(instance_text(inst));
        for (std::size_t f = 0; f < inst.a1().size(); ++f) {
            EXPECT_EQ(std::bit_cast<std::uint64_t>(back.instance.a1()[f]), std::bit_cast<std::uint64_t>(inst.a1()[f]));
            EXPECT_EQ(std::bit_cast<std::uint64_t>(back.instance.a2()[f]), std::bit_cast<std::uint64_t>(inst.a2()[f]));
        }
        EXPECT_EQ(back.instance.q1(), inst.q1());
        EXPECT_EQ(back.instance.q2(), inst.q2());
    }
}

TEST(InstanceIo, WrongLengthNamesA1) {
    Json doc = instance_to_json(find_example("4.2").instance());
    doc["A1"].erase(doc["A1"].size() - 1);
    try {
        parse_instance(doc.dump(2));
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("A1"), std::string::npos) << e.what();
    }
}

TEST(InstanceIo, RejectsNanNullAndStrings) {
    const std::string base = instance_text(find_example("4.2").instance());
    for (const char* bad : {"NaN", "null", "\"1\"", "1e999"}) {
        Json doc = Json::parse(base);
        std::string text = doc.dump(2);
        const std::string key = "\"q2\": [\n    -4.0";
        const auto at = text.find(key);
        ASSERT_NE(at, std::string::npos) << text;
        text.replace(at, key.size(), std::string("\"q2\": [\n    ") + bad);
        EXPECT_THROW(parse_instance(text), FormatError) << bad;
    }
}

TEST(InstanceIo, SyntaxErrorReportsLine) {
    try {
        parse_instance("{\n  \"format_version\": \"1.0\",\n  \"order\": 3,\n  oops\n}");
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
}

TEST(InstanceIo, VersionChecks) {
    Json doc = instance_to_json(find_example("3.1").instance());
    EXPECT_EQ(doc["format_version"], kFormatVersion);
    doc["format_version"] = "2.0";
    EXPECT_THROW(parse_instance(doc.dump()), FormatError);
    doc["format_version"] = "1.7";
    EXPECT_NO_THROW(parse_instance(doc.dump()));
    doc.erase("format_version");
    EXPECT_THROW(parse_instance(doc.dump()), FormatError);
}

TEST(InstanceIo, MissingFileSurfacesError) {
    EXPECT_THROW(load_instance("/nonexistent/dir/x.json"), Error);
    EXPECT_THROW(save_report(Json::object(), "/nonexistent/dir/r.json"), Error);
}

// --- reports ----------------------------------------------------------------------------

TEST(Reports, SolveReportFullPrecision) {
    const SolveReport r = solve_newton(find_example("4.1").instance(), Vector{1, 1}, SolverConfig{});
    const std::string path = temp_path("rep41.json");
    save_report(r, path);
    const Json doc = Json::parse(read_text_file(path));
    EXPECT_EQ(doc["method"], "newton");
    EXPECT_EQ(doc["status"], "converged");
    EXPECT_EQ(doc["x"][0].get<double>(), r.x[0]);
    EXPECT_EQ(doc["x"][1].get<double>(), r.x[1]);
    EXPECT_NEAR(doc["x"][0].get<double>(), 2.0, 1e-8);
    EXPECT_NEAR(doc["x"][1].get<double>(), 1.0, 1e-8);
    std::remove(path.c_str());
}

TEST(Reports, EmptyTraceOmitted) {
    SolveReport r;
    r.x = {1.0};
    const Json doc = report_to_json(r);
    EXPECT_FALSE(doc.contains("trace"));
    r.trace = {1.0, 0.5};
    EXPECT_TRUE(report_to_json(r).contains("trace"));
}

TEST(Reports, ViolatedVerdictCarriesCertificate) {
    const ClassVerdict v = check_pair_class(example_pair("3.5"), PairClass::VP, SearchConfig{});
    ASSERT_TRUE(v.violated());
    const Json doc = verdict_to_json(v);
    EXPECT_EQ(doc["outcome"], "violated");
    ASSERT_TRUE(doc.contains("certificate"));
    EXPECT_EQ(doc["certificate"]["point"]["x"].size(), 2u);
    EXPECT_EQ(doc["certificate"]["components"].size(), 2u);
    EXPECT_TRUE(doc["certificate"].contains("value"));
}

// --- generators ---------------------------------------------------------------------------

TEST(Generate, ZSemipositiveSeed42) {
    const VtcpInstance inst = generate("z-semipositive-pair", 3, 2, 42);
    EXPECT_TRUE(is_z_tensor(inst.a1()));
    EXPECT_TRUE(is_z_tensor(inst.a2()));
    const ClassVerdict w = semi_positive_witness(inst.pair(), SearchConfig{});
    ASSERT_TRUE(w.holds());
    EXPECT_EQ(w.proof_tag, "ones");
}

TEST(Generate, ZSemipositiveProperties) {
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        for (std::size_t m : {2u, 3u, 4u})
            for (std::size_t n : {1u, 2u, 3u}) {
                const VtcpInstance inst = generate(GenerateKind::ZSemipositivePair, m, n, seed);
                EXPECT_TRUE(is_z_tensor(inst.a1()) && is_z_tensor(inst.a2()));
                EXPECT_GT(semi_positive_margin(inst.pair(), Vector(n, 1.0)), 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    EXPECT_LT(inst.q1()[i], 0.0);
                    EXPECT_LT(inst.q2()[i], 0.0);
                }
            }
}

TEST(Generate, Deterministic) {
    for (GenerateKind k : {GenerateKind::ZSemipositivePair, GenerateKind::RandomDensePair}) {
        const VtcpInstance a = generate(k, 3, 3, 7), b = generate(k, 3, 3, 7), c = generate(k, 3, 3, 8);
        EXPECT_EQ(a.pair(), b.pair());
        EXPECT_EQ(a.q1(), b.q1());
        EXPECT_NE(a.pair(), c.pair());
    }
}

TEST(Generate, RandomDenseRange) {
    const VtcpInstance inst = generate(GenerateKind::RandomDensePair, 4, 3, 3);
    for (double v : inst.a1().entries()) {
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
    }
}

TEST(Generate, PaperExampleLookup) {
    const VtcpInstance inst = generate("paper-example", 0, 0, 0, "3.3");
    EXPECT_EQ(inst.a1(), DenseTensor(3, 2, {0, 1, -1, 1, 1, 0, 0, 1}));
    EXPECT_EQ(inst.a2(), DenseTensor(3, 2, {0, -2, 1, 1, -1, 0, -2, -1}));
    EXPECT_THROW(generate("paper-example", 0, 0, 0, "9.9"), InvalidArgument);
    EXPECT_THROW(generate("hilbert", 3, 2, 0), InvalidArgument);
    EXPECT_THROW(generate(GenerateKind::RandomDensePair, 1, 2, 0), InvalidArgument);
}

// --- registry -------------------------------------------------------------------------------

TEST(Registry, Completeness) {
    std::set<std::string> ids;
    for (const PaperExample& ex : example_registry()) {
        ids.insert(ex.id);
        bool has_positive = false;
        for (const Fact& f : ex.facts) {
            EXPECT_FALSE(f.citation.empty()) << ex.id << ": " << f.claim;
            has_positive = has_positive || f.positive;
        }
        EXPECT_TRUE(has_positive) << ex.id;
    }
    EXPECT_EQ(ids, (std::set<std::string>{"3.1", "3.2", "3.3", "3.4", "3.5", "3.6", "3.7", "4.1", "4.2"}));
}

TEST(Registry, NegativeFactsWhereStated) {
    for (const char* id : {"3.1", "3.2", "3.3", "3.5", "3.6", "3.7"}) {
        const PaperExample& ex = find_example(id);
        EXPECT_TRUE(std::any_of(ex.facts.begin(), ex.facts.end(), [](const Fact& f) { return !f.positive; })) << id;
    }
    EXPECT_THROW(find_example("5.1"), InvalidArgument);
}

TEST(Reproduce, AllExamplesPass) {
    for (const PaperExample& ex : example_registry()) {
        const ReproductionReport r = reproduce(ex);
        EXPECT_TRUE(r.passed()) << ex.id;
        for (const FactResult& f : r.facts)
            EXPECT_TRUE(f.passed) << ex.id << ": " << f.claim << " observed " << f.observed;
    }
}

TEST(Reproduce, Example35Details) {
    const ReproductionReport r = reproduce("3.5");
    bool saw_vp = false;
    for (const FactResult& f : r.facts) {
        if (!f.verdict || f.verdict->class_name != "VP")
            continue;
        saw_vp = true;
        EXPECT_TRUE(f.verdict->violated());
    }
    EXPECT_TRUE(saw_vp);
    const ClassEvaluation ev = evaluate_class(example_pair("3.5"), PairClass::VP, Vector{1, -1});
    EXPECT_EQ(ev.components, (Vector{-1, -2}));
}

TEST(Reproduce, UnknownId) { EXPECT_THROW(reproduce("2.9"), InvalidArgument); }
