#include "actitrait/reports.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "actitrait/csv.hpp"

namespace actitrait {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Report row order for groups.
constexpr std::array<Group, 3> kReportGroups = {Group::Total, Group::Female, Group::Male};

}  // namespace

std::string signed_pcc(double pcc) {
  std::string s = fixed(pcc, 2);
  if (s[0] != '-') s.insert(s.begin(), '+');
  return s;
}

std::string cohort_summary(const Cohort& cohort) {
  std::ostringstream os;
  os << pad("id", 14) << pad("gender", 8) << pad("accel", 10) << pad("calls", 8) << pad("messages", 10)
     << "days\n";
  std::size_t total_accel = 0, total_comm = 0;
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto& p = cohort.participants()[i];
    const auto& a = cohort.accel(i);
    const auto& c = cohort.comm(i);
    std::size_t calls = 0;
    for (const auto& e : c) calls += e.channel == Channel::Call;
    std::string days = "-";
    if (!a.empty() || !c.empty()) {
      std::int64_t lo = INT64_MAX, hi = INT64_MIN;
      if (!a.empty()) lo = std::min(lo, a.front().t.epoch_seconds), hi = std::max(hi, a.back().t.epoch_seconds);
      if (!c.empty()) lo = std::min(lo, c.front().t.epoch_seconds), hi = std::max(hi, c.back().t.epoch_seconds);
      days = format_day(civil_day(Timestamp{lo})) + ".." + format_day(civil_day(Timestamp{hi}));
    }
    os << pad(p.id, 14) << pad(std::string(gender_name(p.gender)), 8) << pad(std::to_string(a.size()), 10)
       << pad(std::to_string(calls), 8) << pad(std::to_string(c.size() - calls), 10) << days << "\n";
    total_accel += a.size();
    total_comm += c.size();
  }
  os << cohort.size() << " participants, " << total_accel << " accelerometer samples, " << total_comm
     << " communication events\n";
  return os.str();
}

std::string descriptive_text(const DescriptiveStats& stats) {
  std::ostringstream os;
  os << pad("Gender", 8) << pad("Trait", 19) << pad("N", 5) << pad("Mean", 7) << pad("SD", 7)
     << pad("Median", 8) << pad("Min", 7) << "Max\n";
  for (auto g : kReportGroups) {
    bool first = true;
    for (auto t : kAllTraits) {
      os << pad(first ? std::string(group_name(g)) : "", 8) << pad(std::string(trait_name(t)), 19);
      first = false;
      const auto& s = stats.stats.at({t, g});
      if (!s) {
        os << "0\n";
        continue;
      }
      os << pad(std::to_string(s->n), 5) << pad(fixed(s->mean, 2), 7) << pad(fixed(s->sd, 2), 7)
         << pad(fixed(s->median, 2), 8) << pad(fixed(s->min, 2), 7) << fixed(s->max, 2) << "\n";
    }
  }
  os << "\nFemale vs male (Welch t-test)\n";
  for (auto t : kAllTraits) {
    os << pad(std::string(trait_name(t)), 19);
    const auto& w = stats.gender_test.at(t);
    if (!w)
      os << "n/a\n";
    else
      os << "t=" << pad(fixed(w->t, 3), 9) << "df=" << pad(fixed(w->df, 1), 7) << "p=" << fixed(w->p_value, 4)
         << "\n";
  }
  return os.str();
}

std::string descriptive_csv(const DescriptiveStats& stats) {
  std::ostringstream os;
  os << "group,trait,n,mean,sd,median,min,max,welch_t,welch_df,welch_p\n";
  for (auto g : kReportGroups)
    for (auto t : kAllTraits) {
      os << group_name(g) << "," << trait_name(t) << ",";
      const auto& s = stats.stats.at({t, g});
      if (s)
        os << s->n << "," << csv::format_double(s->mean) << "," << csv::format_double(s->sd) << ","
           << csv::format_double(s->median) << "," << csv::format_double(s->min) << ","
           << csv::format_double(s->max);
      else
        os << "0,,,,,";
      const auto& w = stats.gender_test.at(t);
      if (w)
        os << "," << csv::format_double(w->t) << "," << csv::format_double(w->df) << ","
           << csv::format_double(w->p_value);
      else
        os << ",,,";
      os << "\n";
    }
  return os.str();
}

std::string correlations_csv(const CorrelationTable& table) {
  std::ostringstream os;
  os << "trait,group,feature,category,source,n,pcc\n";
  for (const auto& e : table.entries) {
    const auto& f = table.columns[e.feature];
    os << trait_name(e.trait) << "," << group_name(e.group) << "," << f.name << "," << category_name(f.category)
       << "," << source_name(f.source) << "," << e.n << ","
       << (e.pcc ? csv::format_double(*e.pcc) : std::string()) << "\n";
  }
  return os.str();
}

std::string top_features_text(const CorrelationTable& table) {
  std::ostringstream os;
  os << pad("Trait", 19) << pad("Gender", 8) << "Top features\n";
  for (auto t : kAllTraits) {
    bool first = true;
    for (auto g : {Group::Female, Group::Male, Group::Total}) {
      os << pad(first ? std::string(trait_name(t)) : "", 19) << pad(std::string(group_name(g)), 8);
      first = false;
      auto it = table.top.find({t, g});
      if (it == table.top.end() || it->second.empty()) {
        os << "-\n";
        continue;
      }
      for (std::size_t k = 0; k < it->second.size(); ++k) {
        const auto& tf = it->second[k];
        if (k) os << " ";
        os << "(" << signed_pcc(tf.pcc) << ") " << table.columns[tf.feature].label;
      }
      os << "\n";
    }
  }
  return os.str();
}

std::string top_features_csv(const CorrelationTable& table) {
  std::ostringstream os;
  os << "trait,group,rank,feature,label,pcc\n";
  for (const auto& [key, list] : table.top)
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto& f = table.columns[list[k].feature];
      os << trait_name(key.first) << "," << group_name(key.second) << "," << k + 1 << "," << f.name << ","
         << quote(f.label) << "," << csv::format_double(list[k].pcc) << "\n";
    }
  return os.str();
}

}  // namespace actitrait
