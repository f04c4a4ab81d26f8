#include <gtest/gtest.h>

#include "stratmc/config.hpp"
#include "stratmc/error.hpp"
#include "stratmc/table.hpp"

namespace stratmc {
namespace {

constexpr const char* kBs = R"([model]
type = bs
spots = 50
vols = 0.3
rate = 0.05
maturity = 1
steps = 8

[payoff]
kind = asian-barrier-expiry
strikes = 45, 50
barrier = 60

[run]
methods = la, two-dir-pca
alloc = opt
samples = 5000
strata_2d = 4
seed = 3
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

ErrorCode code_of(const std::string& text) {
  try {
    (void)parse_config_string(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

TEST(Config, ParsesBsPreset) {
  const ExperimentConfig c = parse_config_string(kBs);
  EXPECT_EQ(c.model, ModelKind::Bs);
  EXPECT_EQ(c.bs.times(), 8u);
  EXPECT_EQ(c.payoff, PayoffKind::AsianBarrierExpiry);
  EXPECT_EQ(c.strikes, (std::vector<double>{45, 50}));
  EXPECT_EQ(c.barrier, 60.0);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::La, Method::TwoDirPca}));
  EXPECT_EQ(c.allocations, (std::vector<AllocationRule>{AllocationRule::Optimal}));
  EXPECT_EQ(c.samples, 5000u);
  EXPECT_EQ(c.seed, 3u);
}

TEST(Config, ParsesCir) {
  const ExperimentConfig c = parse_config_string(R"([model]
type = cir
s0 = 100
alpha = 1.5
mu = 100
sigma = 8
rate = 0.05
steps = 64
maturity = 1
monitoring = step-start
[payoff]
kind = asian-basket
strikes = 100
[run]
methods = la, lt, pilot-pca
)");
  EXPECT_EQ(c.model, ModelKind::Cir);
  EXPECT_EQ(c.cir.monitoring, CirMonitoring::StepStart);
  EXPECT_EQ(c.methods.size(), 3u);
}

TEST(Config, RejectsBadInput) {
  EXPECT_EQ(code_of(replace(kBs, "steps = 8", "steps = 8\ncolour = red")), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of(replace(kBs, "samples = 5000", "samples = -5")), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of(replace(kBs, "barrier = 60\n", "")), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of(replace(kBs, "la, two-dir-pca", "la, magic")), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of(replace(kBs, "vols = 0.3", "vols = abc")), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of("[model\n"), ErrorCode::ConfigInvalid);
  try {
    (void)load_config("/nonexistent/path.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Config, MethodNamesRoundTrip) {
  for (Method m : {Method::La, Method::Lt, Method::Pca, Method::PilotPca, Method::LaPca,
                   Method::LtPca, Method::TwoDirLa, Method::TwoDirLt, Method::TwoDirPca})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_TRUE(is_two_direction(Method::LaPca));
  EXPECT_FALSE(is_two_direction(Method::PilotPca));
}

std::vector<ResultRow> rows() {
  ResultRow a{"la", "opt", "asian-basket", 50.0, std::nullopt, 4.0214567890123456, 0.046,
              std::optional<double>(1.25), 90000, 100, 7};
  ResultRow b{"mc", "none", "asian-barrier-expiry", 45.5, 60.0, 1.0 / 3.0, 2.9, std::nullopt,
              100000, 1, 7};
  return {a, b};
}

TEST(Table, CsvRoundTripIsExact) {
  const std::string csv = to_csv(rows());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(parse_csv(csv), rows());
  EXPECT_THROW((void)parse_csv("method,alloc\nla,opt\n"), Error);
}

TEST(Table, JsonHasOneObjectPerRow) {
  const std::string json = to_json(rows());
  EXPECT_NE(json.find("\"method\""), std::string::npos);
  EXPECT_NE(json.find("null"), std::string::npos);
  EXPECT_THROW(emit_table(rows(), OutputFormat::Csv, "/nonexistent/dir/out.csv"), Error);
}

}  // namespace
}  // namespace stratmc
