#include "actitrait/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "actitrait/csv.hpp"
#include "actitrait/error.hpp"

namespace actitrait {
namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Reads the header line, then hands every non-blank data line to `row`.
template <class RowFn>
void for_each_row(std::string_view text, std::string_view source, std::size_t columns,
                  RowFn&& row) {
  csv::LineReader reader(text);
  std::string_view line;
  const std::string src(source);
  if (!reader.next(line) || line.empty())
    throw ParseError(src, 1, "missing header row");
  if (csv::split(line).size() != columns)
    throw ParseError(src, 1, "header must have " + std::to_string(columns) + " columns");
  while (reader.next(line)) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto fields = csv::split(line);
    if (fields.size() != columns)
      throw ParseError(src, reader.line_no(),
                       "expected " + std::to_string(columns) + " fields, got " +
                           std::to_string(fields.size()));
    row(fields, reader.line_no());
  }
}

Timestamp parse_timestamp(std::string_view field, const std::string& src, std::size_t line) {
  const auto v = csv::parse_int(field);
  if (!v) throw ParseError(src, line, "bad epoch_seconds '" + std::string(field) + "'");
  if (*v < 0) throw ParseError(src, line, "negative epoch_seconds");
  return Timestamp{*v};
}

double parse_finite(std::string_view field, const char* name, const std::string& src,
                    std::size_t line) {
  const auto v = csv::parse_double(field);
  if (!v) throw ParseError(src, line, std::string("bad ") + name + " '" + std::string(field) + "'");
  if (!std::isfinite(*v)) throw ParseError(src, line, std::string("non-finite ") + name);
  return *v;
}

template <class Stream>
void sort_unique(Stream& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

}  // namespace

CivilDay civil_day(Timestamp t) noexcept {
  return CivilDay{floor_div(t.epoch_seconds, kSecondsPerDay)};
}

int hour_of_day(Timestamp t) noexcept {
  const std::int64_t sec = t.epoch_seconds - civil_day(t).index * kSecondsPerDay;
  return static_cast<int>(sec / 3600);
}

Weekday weekday(CivilDay d) noexcept {
  // 1970-01-01 was a Thursday.
  const std::int64_t w = ((d.index % 7) + 7 + 4) % 7;
  return static_cast<Weekday>(w);
}

std::string format_day(CivilDay d) {
  // days -> civil date, proleptic Gregorian
  std::int64_t z = d.index + 719468;
  const std::int64_t era = floor_div(z, 146097);
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t day = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t month = mp < 10 ? mp + 3 : mp - 9;
  if (month <= 2) ++y;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lld", static_cast<long long>(y),
                static_cast<long long>(month), static_cast<long long>(day));
  return buf;
}

std::string_view trait_name(Trait t) noexcept {
  switch (t) {
    case Trait::Extraversion: return "Extraversion";
    case Trait::Agreeableness: return "Agreeableness";
    case Trait::Conscientiousness: return "Conscientiousness";
    case Trait::Neuroticism: return "Neuroticism";
    case Trait::Openness: return "Openness";
  }
  return "?";
}

std::optional<Trait> parse_trait(std::string_view s) {
  const auto lower = csv::to_lower(s);
  for (auto t : kAllTraits)
    if (csv::to_lower(trait_name(t)) == lower) return t;
  if (lower.size() == 1) {
    const std::string_view codes = "eacno";
    const auto pos = codes.find(lower[0]);
    if (pos != std::string_view::npos) return kAllTraits[pos];
  }
  return std::nullopt;
}

double BigFive::get(Trait t) const noexcept {
  switch (t) {
    case Trait::Extraversion: return extraversion;
    case Trait::Agreeableness: return agreeableness;
    case Trait::Conscientiousness: return conscientiousness;
    case Trait::Neuroticism: return neuroticism;
    case Trait::Openness: return openness;
  }
  return 0.0;
}

void BigFive::set(Trait t, double v) noexcept {
  switch (t) {
    case Trait::Extraversion: extraversion = v; break;
    case Trait::Agreeableness: agreeableness = v; break;
    case Trait::Conscientiousness: conscientiousness = v; break;
    case Trait::Neuroticism: neuroticism = v; break;
    case Trait::Openness: openness = v; break;
  }
}

std::string_view gender_name(Gender g) noexcept { return g == Gender::Female ? "female" : "male"; }

std::string_view channel_name(Channel c) noexcept { return c == Channel::Call ? "call" : "message"; }

std::string_view direction_name(Direction d) noexcept {
  switch (d) {
    case Direction::Incoming: return "incoming";
    case Direction::Outgoing: return "outgoing";
    case Direction::Missed: return "missed";
  }
  return "?";
}

void validate_event(const CommEvent& e) {
  if (e.duration_seconds < 0) throw ValidationError("negative duration");
  if (e.channel == Channel::Message) {
    if (e.direction == Direction::Missed)
      throw ValidationError("direction 'missed' is only valid for calls");
    if (e.duration_seconds != 0) throw ValidationError("messages must have duration 0");
  }
}

AccelStreams parse_accel_text(std::string_view text, std::string_view source) {
  AccelStreams out;
  const std::string src(source);
  for_each_row(text, source, 5, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f[0].empty()) throw ParseError(src, line, "empty participant_id");
    AccelSample s;
    s.t = parse_timestamp(f[1], src, line);
    s.x = parse_finite(f[2], "x", src, line);
    s.y = parse_finite(f[3], "y", src, line);
    s.z = parse_finite(f[4], "z", src, line);
    auto it = out.find(f[0]);
    if (it == out.end()) it = out.emplace(std::string(f[0]), AccelStream{}).first;
    it->second.push_back(s);
  });
  for (auto& [id, stream] : out) sort_unique(stream);
  return out;
}

CommStreams parse_comm_text(std::string_view text, std::string_view source) {
  CommStreams out;
  const std::string src(source);
  for_each_row(text, source, 6, [&](const std::vector<std::string_view>& f, std::size_t line) {
    if (f[0].empty()) throw ParseError(src, line, "empty participant_id");
    CommEvent e;
    e.t = parse_timestamp(f[1], src, line);
    const auto channel = csv::to_lower(f[2]);
    if (channel == "call") e.channel = Channel::Call;
    else if (channel == "message") e.channel = Channel::Message;
    else throw ParseError(src, line, "unknown channel '" + std::string(f[2]) + "'");
    const auto dir = csv::to_lower(f[3]);
    if (dir == "incoming") e.direction = Direction::Incoming;
    else if (dir == "outgoing") e.direction = Direction::Outgoing;
    else if (dir == "missed") e.direction = Direction::Missed;
    else throw ParseError(src, line, "unknown direction '" + std::string(f[3]) + "'");
    if (f[4].empty()) throw ParseError(src, line, "empty contact");
    e.contact = std::string(f[4]);
    const auto dur = csv::parse_int(f[5]);
    if (!dur) throw ParseError(src, line, "bad duration_seconds '" + std::string(f[5]) + "'");
    e.duration_seconds = *dur;
    try {
      validate_event(e);
    } catch (const ValidationError& err) {
      throw ParseError(src, line, err.what());
    }
    auto it = out.find(f[0]);
    if (it == out.end()) it = out.emplace(std::string(f[0]), CommStream{}).first;
    it->second.push_back(std::move(e));
  });
  for (auto& [id, stream] : out) sort_unique(stream);
  return out;
}

std::vector<Participant> parse_roster_text(std::string_view text, std::string_view source) {
  std::vector<Participant> out;
  const std::string src(source);
  for_each_row(text, source, 7, [&](const std::vector<std::string_view>& f, std::size_t line) {
    Participant p;
    if (f[0].empty()) throw ParseError(src, line, "empty id");
    p.id = std::string(f[0]);
    const auto g = csv::to_lower(f[1]);
    if (g == "female" || g == "f") p.gender = Gender::Female;
    else if (g == "male" || g == "m") p.gender = Gender::Male;
    else throw ParseError(src, line, "unknown gender '" + std::string(f[1]) + "'");
    for (std::size_t k = 0; k < kAllTraits.size(); ++k) {
      const auto v = csv::parse_double(f[2 + k]);
      if (!v) throw ParseError(src, line, "missing or bad " + std::string(trait_name(kAllTraits[k])));
      if (!(*v >= 1.0 && *v <= 5.0))
        throw ParseError(src, line, std::string(trait_name(kAllTraits[k])) + " score " +
                                        csv::format_double(*v) + " outside [1,5]");
      p.big5.set(kAllTraits[k], *v);
    }
    out.push_back(std::move(p));
  });
  return out;
}

AccelStreams parse_accel(const std::filesystem::path& path) {
  return parse_accel_text(csv::read_file(path.string()), path.string());
}

CommStreams parse_comm(const std::filesystem::path& path) {
  return parse_comm_text(csv::read_file(path.string()), path.string());
}

std::vector<Participant> parse_roster(const std::filesystem::path& path) {
  return parse_roster_text(csv::read_file(path.string()), path.string());
}

Cohort::Cohort(std::vector<Participant> participants, AccelStreams accel, CommStreams comm)
    : participants_(std::move(participants)) {
  std::unordered_set<std::string> seen;
  for (const auto& p : participants_) {
    if (!seen.insert(p.id).second) throw ValidationError("duplicate participant id '" + p.id + "'");
    for (auto t : kAllTraits) {
      const double v = p.big5.get(t);
      if (!(v >= 1.0 && v <= 5.0))
        throw ValidationError("participant '" + p.id + "': " + std::string(trait_name(t)) +
                              " outside [1,5]");
    }
  }
  for (const auto& [id, s] : accel)
    if (!seen.count(id)) throw ValidationError("accelerometer rows for unknown participant '" + id + "'");
  for (const auto& [id, s] : comm)
    if (!seen.count(id)) throw ValidationError("communication rows for unknown participant '" + id + "'");

  accel_.resize(participants_.size());
  comm_.resize(participants_.size());
  std::optional<Timestamp> lo, hi;
  auto widen = [&](Timestamp t) {
    if (!lo || t < *lo) lo = t;
    if (!hi || t > *hi) hi = t;
  };
  for (std::size_t i = 0; i < participants_.size(); ++i) {
    if (auto it = accel.find(participants_[i].id); it != accel.end()) {
      accel_[i] = std::move(it->second);
      if (!std::is_sorted(accel_[i].begin(), accel_[i].end())) sort_unique(accel_[i]);
    }
    if (auto it = comm.find(participants_[i].id); it != comm.end()) {
      comm_[i] = std::move(it->second);
      for (const auto& e : comm_[i]) validate_event(e);
      if (!std::is_sorted(comm_[i].begin(), comm_[i].end())) sort_unique(comm_[i]);
    }
    if (!accel_[i].empty()) {
      widen(accel_[i].front().t);
      widen(accel_[i].back().t);
    }
    if (!comm_[i].empty()) {
      widen(comm_[i].front().t);
      widen(comm_[i].back().t);
    }
  }
  if (lo) span_ = DaySpan{civil_day(*lo), civil_day(*hi)};
}

std::optional<std::size_t> Cohort::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < participants_.size(); ++i)
    if (participants_[i].id == id) return i;
  return std::nullopt;
}

Cohort load_cohort(const std::filesystem::path& roster_path,
                   const std::filesystem::path& accel_path,
                   const std::filesystem::path& comm_path) {
  auto roster = parse_roster(roster_path);
  auto accel = parse_accel(accel_path);
  auto comm = parse_comm(comm_path);
  return Cohort(std::move(roster), std::move(accel), std::move(comm));
}

void write_accel_header(std::ostream& os) { os << "participant_id,epoch_seconds,x,y,z\n"; }

void write_accel_rows(std::ostream& os, std::string_view id, const AccelStream& stream) {
  for (const auto& s : stream)
    os << id << ',' << s.t.epoch_seconds << ',' << csv::format_double(s.x) << ','
       << csv::format_double(s.y) << ',' << csv::format_double(s.z) << '\n';
}

void write_comm_header(std::ostream& os) {
  os << "participant_id,epoch_seconds,channel,direction,contact,duration_seconds\n";
}

void write_comm_rows(std::ostream& os, std::string_view id, const CommStream& stream) {
  for (const auto& e : stream)
    os << id << ',' << e.t.epoch_seconds << ',' << channel_name(e.channel) << ','
       << direction_name(e.direction) << ',' << e.contact << ',' << e.duration_seconds << '\n';
}

void write_roster(std::ostream& os, const std::vector<Participant>& participants) {
  os << "id,gender,E,A,C,N,O\n";
  for (const auto& p : participants) {
    os << p.id << ',' << gender_name(p.gender);
    for (auto t : kAllTraits) os << ',' << csv::format_double(p.big5.get(t));
    os << '\n';
  }
}

std::string serialize_accel(const AccelStreams& streams) {
  std::ostringstream os;
  write_accel_header(os);
  for (const auto& [id, s] : streams) write_accel_rows(os, id, s);
  return os.str();
}

std::string serialize_comm(const CommStreams& streams) {
  std::ostringstream os;
  write_comm_header(os);
  for (const auto& [id, s] : streams) write_comm_rows(os, id, s);
  return os.str();
}

std::string serialize_roster(const std::vector<Participant>& participants) {
  std::ostringstream os;
  write_roster(os, participants);
  return os.str();
}

}  // namespace actitrait
