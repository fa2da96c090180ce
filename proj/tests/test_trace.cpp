#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace windpar;
using namespace testsupport;

TEST(Trace, WriteReadRoundTrip) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    const auto d = random_start(rng);
    const auto t = random_walk(d, 80, trial_seed(41, k), 30);
    const auto text = trace_text(t);
    const auto back = read_trace_text(text);
    ASSERT_EQ(back.steps.size(), t.steps.size());
    EXPECT_EQ(back.start, t.start);
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      EXPECT_EQ(back.steps[i].move, t.steps[i].move);
      EXPECT_EQ(back.steps[i].diagram, t.steps[i].diagram);
      EXPECT_TRUE(back.steps[i].correspondence.same_record(t.steps[i].correspondence));
    }
    EXPECT_EQ(trace_text(back), text);
  }
}

TEST(Trace, StartOnlyTrace) {
  const auto t = read_trace_text("{\"start\": \"genus 0\\ncode\"}\n");
  EXPECT_TRUE(t.steps.empty());
  EXPECT_EQ(t.start, Diagram());
}

TEST(Trace, LineFormat) {
  MoveTrace t{parse("genus 0\ncode O1+ U1+"), {}};
  t.push(Move{MoveKind::m4prime, {1}, {}});
  const auto text = trace_text(t);
  const auto nl = text.find('\n');
  EXPECT_EQ(text.substr(0, nl), R"({"start":"genus 0\ncode O1+ U1+"})");
  const auto j = nlohmann::json::parse(text.substr(nl + 1));
  EXPECT_EQ(j["move"]["kind"], "M4prime");
  EXPECT_EQ(j["move"]["site"], nlohmann::json::array({1}));
  EXPECT_TRUE(j["move"]["params"].is_object());
  EXPECT_EQ(j["surviving"], nlohmann::json::object({{"1", 1}}));
  EXPECT_EQ(j["created"], nlohmann::json::array());
  EXPECT_EQ(j["result"], "genus 0\ncode J+ U1- J- O1-");
  EXPECT_FALSE(j.contains("r3_roles"));
}

TEST(Trace, RejectsTamperedFiles) {
  MoveTrace t{parse("genus 0\ncode O1+ U1+ J+"), {}};
  t.push(Move{MoveKind::m4prime, {1}, {}});
  t.push(Move{MoveKind::r1_add, {0, 1}, {{over(2, 1), under(2, 1)}, {}, {}, 0, false}});
  const auto text = trace_text(t);
  EXPECT_NO_THROW(read_trace_text(text));

  auto tamper = [&](const std::string &from, const std::string &to) {
    auto s = text;
    const auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    s.replace(at, from.size(), to);
    return s;
  };
  EXPECT_THROW(read_trace_text(tamper("J+ U1- J- O1- J+\"", "J+ U1- J- O1+ J+\"")), MalformedTrace);
  EXPECT_THROW(read_trace_text(tamper("\"surviving\":{\"1\":1}", "\"surviving\":{\"1\":2}")), MalformedTrace);
  EXPECT_THROW(read_trace_text(tamper("\"created\":[2]", "\"created\":[]")), MalformedTrace);
  EXPECT_THROW(read_trace_text(tamper("M4prime", "R1_remove")), MalformedTrace);
  EXPECT_THROW(read_trace_text(tamper("M4prime", "R9")), MalformedTrace);
  EXPECT_THROW(read_trace_text(tamper("{\"start\"", "{\"begin\"")), MalformedTrace);
  EXPECT_THROW(read_trace_text(text + "not json\n"), MalformedTrace);
  EXPECT_THROW(read_trace_text(""), MalformedTrace);
  EXPECT_THROW(read_trace_text("{\"start\": \"genus 0\\ncode O1+\"}"), MalformedTrace);
}

TEST(Trace, TrialSeedsAreStable) {
  EXPECT_EQ(trial_seed(7, 3), trial_seed(7, 3));
  EXPECT_NE(trial_seed(7, 3), trial_seed(7, 4));
  EXPECT_NE(trial_seed(7, 3), trial_seed(8, 3));
  // splitmix64 reference value for input 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}
