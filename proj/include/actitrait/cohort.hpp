#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace actitrait {

// Seconds since the Unix epoch, already shifted to the participant's local
// civil time. Calendar fields are derived with plain day arithmetic.
struct Timestamp {
  std::int64_t epoch_seconds = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Day number since 1970-01-01 in local civil time.
struct CivilDay {
  std::int64_t index = 0;

  friend auto operator<=>(const CivilDay&, const CivilDay&) = default;
};

enum class Weekday { Sunday, Monday, Tuesday, Wednesday, Thursday, Friday, Saturday };

CivilDay civil_day(Timestamp t) noexcept;
int hour_of_day(Timestamp t) noexcept;
Weekday weekday(CivilDay d) noexcept;
// "YYYY-MM-DD".
std::string format_day(CivilDay d);

enum class Trait { Extraversion, Agreeableness, Conscientiousness, Neuroticism, Openness };
inline constexpr std::array<Trait, 5> kAllTraits = {
    Trait::Extraversion, Trait::Agreeableness, Trait::Conscientiousness, Trait::Neuroticism,
    Trait::Openness};

std::string_view trait_name(Trait t) noexcept;
std::optional<Trait> parse_trait(std::string_view s);

struct BigFive {
  double extraversion = 3.0;
  double agreeableness = 3.0;
  double conscientiousness = 3.0;
  double neuroticism = 3.0;
  double openness = 3.0;

  double get(Trait t) const noexcept;
  void set(Trait t, double v) noexcept;
};

enum class Gender { Female, Male };
std::string_view gender_name(Gender g) noexcept;

struct Participant {
  std::string id;
  Gender gender = Gender::Female;
  BigFive big5;
};

struct AccelSample {
  Timestamp t;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend auto operator<=>(const AccelSample&, const AccelSample&) = default;
};

enum class Channel { Call, Message };
enum class Direction { Incoming, Outgoing, Missed };

std::string_view channel_name(Channel c) noexcept;
std::string_view direction_name(Direction d) noexcept;

struct CommEvent {
  Timestamp t;
  Channel channel = Channel::Call;
  Direction direction = Direction::Incoming;
  std::string contact;
  std::int64_t duration_seconds = 0;

  friend auto operator<=>(const CommEvent&, const CommEvent&) = default;
};

// Throws ValidationError when the channel/direction/duration combination is
// not allowed.
void validate_event(const CommEvent& e);

using AccelStream = std::vector<AccelSample>;
using CommStream = std::vector<CommEvent>;
using AccelStreams = std::map<std::string, AccelStream, std::less<>>;
using CommStreams = std::map<std::string, CommStream, std::less<>>;

struct DaySpan {
  CivilDay first;
  CivilDay last;

  friend bool operator==(const DaySpan&, const DaySpan&) = default;
};

// Participants and their streams, index-aligned. Immutable after load.
class Cohort {
 public:
  Cohort() = default;
  // Validates ids, score ranges, stream keys and stream ordering.
  Cohort(std::vector<Participant> participants, AccelStreams accel, CommStreams comm);

  const std::vector<Participant>& participants() const noexcept { return participants_; }
  std::size_t size() const noexcept { return participants_.size(); }
  const AccelStream& accel(std::size_t i) const { return accel_.at(i); }
  const CommStream& comm(std::size_t i) const { return comm_.at(i); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  // First and last civil day touched by any stream; empty when no data.
  const std::optional<DaySpan>& collection_span() const noexcept { return span_; }

 private:
  std::vector<Participant> participants_;
  std::vector<AccelStream> accel_;
  std::vector<CommStream> comm_;
  std::optional<DaySpan> span_;
};

AccelStreams parse_accel(const std::filesystem::path& path);
CommStreams parse_comm(const std::filesystem::path& path);
std::vector<Participant> parse_roster(const std::filesystem::path& path);

AccelStreams parse_accel_text(std::string_view text, std::string_view source = "<accel>");
CommStreams parse_comm_text(std::string_view text, std::string_view source = "<comm>");
std::vector<Participant> parse_roster_text(std::string_view text,
                                           std::string_view source = "<roster>");

Cohort load_cohort(const std::filesystem::path& roster_path,
                   const std::filesystem::path& accel_path,
                   const std::filesystem::path& comm_path);

// Writers produce exactly the format the parsers accept, with shortest
// round-trip number formatting. The *_header/*_rows variants let callers
// stream one participant at a time.
void write_accel_header(std::ostream& os);
void write_accel_rows(std::ostream& os, std::string_view id, const AccelStream& stream);
void write_comm_header(std::ostream& os);
void write_comm_rows(std::ostream& os, std::string_view id, const CommStream& stream);
void write_roster(std::ostream& os, const std::vector<Participant>& participants);

std::string serialize_accel(const AccelStreams& streams);
std::string serialize_comm(const CommStreams& streams);
std::string serialize_roster(const std::vector<Participant>& participants);

}  // namespace actitrait
