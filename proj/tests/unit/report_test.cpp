#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "coporeg/config.hpp"
#include "coporeg/errors.hpp"
#include "coporeg/report.hpp"
#include "oracles.hpp"

namespace coporeg {
namespace {

using nlohmann::json;

TEST(Report, RegularizedRunRoundTrips) {
  const auto prog = testing::load_fixture("e3.json");
  const RunConfig cfg;
  const auto res = reg_lcop(prog, cfg.reg_options());
  const auto text = build_report(prog, res, cfg);
  const auto j = json::parse(text);
  EXPECT_EQ(j["status"], "regularized");
  EXPECT_EQ(j["m_star"], 1);
  // Indices in reports are 1-based.
  EXPECT_EQ(j["iterations"][0]["records"][0]["L"], json::array({1, 2}));

  const auto parsed = parse_report(text);
  const auto& led = std::get<Regularized>(res.outcome).ledger;
  ASSERT_EQ(parsed.ledger.size(), led.size());
  EXPECT_EQ(parsed.m_star, 1);
  EXPECT_EQ(parsed.ledger[0].Y, led[0].Y);
  EXPECT_EQ(parsed.ledger[0].face.front().L, led[0].face.front().L);
  EXPECT_TRUE(verify_ledger(parsed.ledger, prog).ok());
}

TEST(Report, RegularRun) {
  const auto prog = testing::load_fixture("e1.json");
  const RunConfig cfg;
  const auto j = json::parse(build_report(prog, reg_lcop(prog), cfg));
  EXPECT_EQ(j["status"], "regular");
  EXPECT_EQ(j["m_star"], 0);
  EXPECT_TRUE(j["iterations"].empty());
}

TEST(Report, SchemaNamesTheMissingField) {
  const auto prog = testing::load_fixture("e2.json");
  auto j = json::parse(build_report(prog, reg_lcop(prog), RunConfig{}));
  j.erase("m_star");
  try {
    validate_report_schema(j.dump());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("m_star"), std::string::npos);
  }
  EXPECT_THROW(validate_report_schema("[]"), ParseError);
}

TEST(Report, SummaryEchoesSmallMatrices) {
  const auto prog = testing::load_fixture("e2.json");
  const auto s = summary_text(prog, reg_lcop(prog));
  EXPECT_NE(s.find("regularized"), std::string::npos);
  // Y_1 = e_1 e_1' up to scale, printed row by row.
  EXPECT_NE(s.find("[0, 0]"), std::string::npos);
}

TEST(Config, MergeAndValidate) {
  RunConfig cfg;
  merge_config_json(cfg, R"({"tol_feas": 1e-8, "h": 0.0625, "cap": 3, "seed": 9})");
  EXPECT_DOUBLE_EQ(cfg.tol.feas, 1e-8);
  EXPECT_DOUBLE_EQ(cfg.h, 0.0625);
  EXPECT_EQ(cfg.cap, 3);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.reg_options().cap, 3);
  EXPECT_DOUBLE_EQ(cfg.sip_options().h, 0.0625);

  EXPECT_THROW(merge_config_json(cfg, R"({"bogus": 1})"), ParseError);
  cfg.h = 0.5;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.h = 0.125;
  cfg.tol.cop = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.tol.cop = 1e-9;
  cfg.cap = -1;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Config, TolerancesJson) {
  Tolerances t;
  t.band = 2e-6;
  const auto j = json::parse(tolerances_json(t));
  EXPECT_DOUBLE_EQ(j["tol_band"].get<double>(), 2e-6);
  EXPECT_EQ(j.size(), 11u);
}

}  // namespace
}  // namespace coporeg
