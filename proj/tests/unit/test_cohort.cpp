#include <doctest.h>

#include <algorithm>
#include <random>

#include "actitrait/cohort.hpp"
#include "actitrait/error.hpp"
#include "support.hpp"

using namespace actitrait;
using namespace test_support;

namespace {
const std::string kAccel = "participant_id,epoch_seconds,x,y,z\n";
const std::string kComm = "participant_id,epoch_seconds,channel,direction,contact,duration_seconds\n";
const std::string kRoster = "id,gender,E,A,C,N,O\n";
}  // namespace

TEST_CASE("calendar helpers") {
  CHECK(civil_day(Timestamp{kMonday}).index == kMonday / 86400);
  CHECK(weekday(civil_day(Timestamp{kMonday})) == Weekday::Monday);
  CHECK(weekday(CivilDay{0}) == Weekday::Thursday);
  CHECK(weekday(CivilDay{-1}) == Weekday::Wednesday);
  CHECK(format_day(CivilDay{kMonday / 86400}) == "2010-03-01");
  CHECK(format_day(CivilDay{0}) == "1970-01-01");
  CHECK(hour_of_day(Timestamp{kMonday + 5 * 3600 + 59}) == 5);
}

TEST_CASE("parsed rows come back sorted") {
  std::string text = kAccel + "b,30,1,1,1\na,20,1,1,1\na,10,2,2,2\na,20,0,1,1\n";
  const auto s = parse_accel_text(text);
  const auto& a = s.at("a");
  REQUIRE(a.size() == 3);
  CHECK(std::is_sorted(a.begin(), a.end(), [](auto& x, auto& y) { return x.t < y.t; }));
  CHECK(a[0].t.epoch_seconds == 10);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_accel_text(kAccel + "p,1,1,1,1\np,2,1,x,1\n", "f.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_accel_text(kAccel + "p,-5,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_accel_text(kAccel + "p,5,1,nan,1\n"), ParseError);
  CHECK_THROWS_AS(parse_accel_text(kAccel + "p,5,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse_accel_text(""), ParseError);
  CHECK_THROWS_AS(parse_accel_text("participant_id,epoch_seconds,x\n"), ParseError);
}

TEST_CASE("communication invariants") {
  CHECK_THROWS_AS(parse_comm_text(kComm + "p,1,message,outgoing,a,4\n"), ParseError);
  CHECK_THROWS_AS(parse_comm_text(kComm + "p,1,call,outgoing,a,-1\n"), ParseError);
  CHECK_THROWS_AS(parse_comm_text(kComm + "p,1,fax,outgoing,a,0\n"), ParseError);
  CHECK_THROWS_AS(parse_comm_text(kComm + "p,1,call,sideways,a,0\n"), ParseError);
  const auto s = parse_comm_text(kComm + "p,1,CALL,Missed,a,0\r\np,2,message,incoming,a,0\r\n");
  REQUIRE(s.at("p").size() == 2);
  CHECK(s.at("p")[0].direction == Direction::Missed);
  CHECK(s.at("p")[1].channel == Channel::Message);
}

TEST_CASE("roster parsing") {
  const auto r = parse_roster_text(kRoster + "a,F,1,2,3,4,5\n\nb,male,5,4,3,2,1\n");
  REQUIRE(r.size() == 2);
  CHECK(r[0].gender == Gender::Female);
  CHECK(r[1].big5.get(Trait::Openness) == 1.0);
  CHECK_THROWS_AS(parse_roster_text(kRoster + "a,other,1,2,3,4,5\n"), ParseError);
  CHECK_THROWS_AS(parse_roster_text(kRoster + "a,female,1,2,3,4,\n"), ParseError);
  CHECK_THROWS_AS(parse_roster_text(kRoster + "a,female,0.5,2,3,4,4\n"), Error);
}

TEST_CASE("cohort validation") {
  auto roster = parse_roster_text(kRoster + "a,female,3,3,3,3,3\nb,male,3,3,3,3,3\n");
  CHECK_THROWS_AS(Cohort(parse_roster_text(kRoster + "a,female,3,3,3,3,3\na,male,3,3,3,3,3\n"), {}, {}),
                  ValidationError);
  CHECK_THROWS_AS(Cohort(roster, parse_accel_text(kAccel + "zz,1,1,1,1\n"), {}), ValidationError);
  Cohort c(roster, parse_accel_text(kAccel + "b,100000,1,1,1\n"),
           parse_comm_text(kComm + "a,300000,call,incoming,x,1\n"));
  CHECK(c.accel(0).empty());
  CHECK(c.accel(1).size() == 1);
  CHECK(c.comm(0).size() == 1);
  CHECK(*c.index_of("b") == 1);
  CHECK_FALSE(c.index_of("q").has_value());
  REQUIRE(c.collection_span().has_value());
  CHECK(c.collection_span()->first.index == 1);
  CHECK(c.collection_span()->last.index == 3);
  CHECK_FALSE(Cohort(roster, {}, {}).collection_span().has_value());
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  AccelStreams accel;
  CommStreams comm;
  for (const char* id : {"p1", "p2"}) {
    auto& a = accel[id];
    for (int i = 0; i < 200; ++i) a.push_back(sample(kMonday + i / 3, u(rng), u(rng) * 1e-7, u(rng) * 1e9));
    std::sort(a.begin(), a.end());
    auto& c = comm[id];
    c.push_back(event(kMonday + 5, Direction::Missed, "xy"));
    c.push_back(event(kMonday + 9, Direction::Outgoing, "q", Channel::Message));
    c.push_back(event(kMonday + 9, Direction::Outgoing, "q", Channel::Call, 71));
    std::sort(c.begin(), c.end());
  }
  const auto a1 = parse_accel_text(serialize_accel(accel));
  const auto c1 = parse_comm_text(serialize_comm(comm));
  CHECK(a1 == accel);
  CHECK(c1 == comm);
  CHECK(parse_accel_text(serialize_accel(a1)) == a1);
  std::vector<Participant> ps{person("p1", Gender::Male, 2.25), person("p2", Gender::Female, 4.75)};
  const auto r = parse_roster_text(serialize_roster(ps));
  REQUIRE(r.size() == 2);
  CHECK(r[0].id == "p1");
  CHECK(r[1].big5.get(Trait::Neuroticism) == 4.75);
}

TEST_CASE("trait and enum names") {
  for (auto t : kAllTraits) CHECK(parse_trait(trait_name(t)) == t);
  CHECK(parse_trait("e") == Trait::Extraversion);
  CHECK(parse_trait("o") == Trait::Openness);
  CHECK_FALSE(parse_trait("x").has_value());
}
