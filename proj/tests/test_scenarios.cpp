#include <gtest/gtest.h>

#include <set>

#include "alo/alo.hpp"

using namespace alo;

namespace {

void expect_all_pass(const ReportBundle& b)
{
    EXPECT_FALSE(b.reports.empty());
    for (const auto* f : b.failures())
        ADD_FAILURE() << b.scenario << ": " << f->identity << " residual " << f->residual << " > " << f->tolerance;
}

ScenarioOverrides with_params(json params)
{
    ScenarioOverrides o;
    o.params = std::move(params);
    return o;
}

} // namespace

TEST(Catalog, ListsEveryModel)
{
    const auto list = list_scenarios();
    EXPECT_GE(list.size(), 9u);
    std::set<std::string> ids;
    for (const auto& s : list) ids.insert(s.id);
    EXPECT_EQ(ids.size(), list.size());
    for (const char* id : {"fermion", "boson", "quon", "gha-linear", "gha-square-well", "pb1d", "pb2d", "ab2d", "eps2d"})
        EXPECT_TRUE(ids.contains(id)) << id;
    for (const auto& s : list)
        if (s.id == "quon") EXPECT_NE(s.description.find("q-mutation"), std::string::npos);
}

TEST(Catalog, UnknownIdIsRejected) { EXPECT_THROW((void)run_scenario("swanson"), ParameterError); }

TEST(Scenario, FermionPasses)
{
    const auto b = run_scenario("fermion");
    expect_all_pass(b);
    ASSERT_NE(b.find("ladder_relation"), nullptr);
    EXPECT_EQ(b.find("ladder_relation")->relation, "[H,Z] = lambda Z");
}

TEST(Scenario, BosonPasses)
{
    const auto b = run_scenario("boson");
    expect_all_pass(b);
    EXPECT_EQ(b.find("down_chain_norms")->details["levels_checked"], 41);
}

TEST(Scenario, QuonPassesAcrossQ)
{
    for (double q : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        SCOPED_TRACE("q=" + std::to_string(q));
        expect_all_pass(run_scenario("quon", with_params({{"q", q}})));
    }
}

TEST(Scenario, GhaPresetsPass)
{
    expect_all_pass(run_scenario("gha-linear"));
    expect_all_pass(run_scenario("gha-square-well"));
}

TEST(Scenario, PseudoBoson1dPasses)
{
    const auto b = run_scenario("pb1d");
    expect_all_pass(b);
    EXPECT_NE(b.find("alternate_seed"), nullptr);
    EXPECT_NE(b.find("biorthogonal_factorial"), nullptr);
}

TEST(Scenario, TwoModeScenariosPass)
{
    expect_all_pass(run_scenario("pb2d"));
    expect_all_pass(run_scenario("ab2d"));
}

TEST(Scenario, EpsilonModelRejectsBadXi)
{
    EXPECT_THROW((void)run_scenario("eps2d", with_params({{"xi", 0.5}})), ParameterError);
    EXPECT_THROW((void)run_scenario("eps2d", with_params({{"eps", 1.5}})), ParameterError);
}

TEST(Scenario, ResultsAreDeterministic)
{
    ScenarioOverrides o;
    o.include_vectors = true;
    const json first = run_scenario("pb1d", o);
    const json second = run_scenario("pb1d", o);
    EXPECT_EQ(first.dump(), second.dump());
}

TEST(Scenario, ImpossibleToleranceFailsWithoutThrowing)
{
    ScenarioOverrides o = with_params({{"q", 0.5}});
    o.tol.relation = 1e-30;
    const auto b = run_scenario("quon", o);
    EXPECT_FALSE(b.all_pass());
    EXPECT_NE(b.find("ladder_relation"), nullptr);
    EXPECT_FALSE(b.find("ladder_relation")->pass);
}

TEST(Scenario, DimensionOverrides)
{
    ScenarioOverrides o;
    o.dims = std::vector<std::size_t>{30};
    o.guard = 6;
    const auto b = run_scenario("quon", o);
    expect_all_pass(b);
    EXPECT_EQ(b.extras["dims"], json::array({30}));
    o.dims = std::vector<std::size_t>{30, 30};
    EXPECT_THROW((void)run_scenario("quon", o), ParameterError);
    EXPECT_THROW((void)run_scenario("boson", with_params({{"omega", "fast"}})), ParameterError);
}

TEST(Overrides, ParsesConfigFile)
{
    ScenarioOverrides o;
    const auto id = parse_overrides(json::parse(R"({
        "model": "gha", "params": {"preset": "square-well", "step": 0.5},
        "dims": [40], "guard": 8, "max_len": 12,
        "tolerances": {"relation": 1e-11, "eigen": 1e-9, "tail": 1e-9, "zero": 1e-13, "gram": 1e-7}})"),
                                    o);
    EXPECT_EQ(id, "gha-square-well");
    EXPECT_EQ(o.dims, std::vector<std::size_t>{40});
    EXPECT_EQ(o.guard, 8u);
    EXPECT_EQ(o.max_len, 12u);
    EXPECT_EQ(o.tol.relation, 1e-11);
    EXPECT_EQ(o.tol.eigen, 1e-9);
    EXPECT_EQ(o.tol.tail, 1e-9);
    EXPECT_EQ(o.tol.zero, 1e-13);
    EXPECT_EQ(o.tol.gram, 1e-7);
    EXPECT_EQ(o.params["step"], 0.5);
}

TEST(Overrides, MalformedConfigIsAFormatError)
{
    ScenarioOverrides o;
    EXPECT_THROW((void)parse_overrides(json::array(), o), FormatError);
    EXPECT_THROW((void)parse_overrides(json::parse(R"({"params": 3})"), o), FormatError);
    EXPECT_THROW((void)parse_overrides(json::parse(R"({"dims": "big"})"), o), FormatError);
    EXPECT_THROW((void)parse_overrides(json::parse(R"({"model": "gha", "params": {"preset": "cubic"}})"), o),
                 FormatError);
    EXPECT_THROW((void)parse_overrides(json::parse(R"({"tolerances": []})"), o), FormatError);
    EXPECT_EQ(parse_overrides(json::parse(R"({"guard": 3})"), o), "");
}
