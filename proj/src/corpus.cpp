#include "pivotalign/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "pivotalign/errors.hpp"

namespace pivotalign::corpus {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::string& unit_text(const rebuild::SentenceUnit& u, rebuild::Stream s) {
  switch (s) {
    case rebuild::Stream::Pivot: return u.pivot_text;
    case rebuild::Stream::A: return u.a_text;
    case rebuild::Stream::B: return u.b_text;
  }
  throw ValidationError("unknown stream");
}

long count_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot reopen for line count", path);
  long n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

SplitSpec SplitSpec::parse(std::string_view text) {
  SplitSpec spec;
  std::vector<std::string>* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no, 1);
      std::string section = line.substr(1, line.size() - 2);
      if (section == "exclude") {
        current = &spec.exclude_from_train;
      } else if (section.rfind("dev:", 0) == 0) {
        current = &spec.dev_sets[section.substr(4)];
      } else if (section.rfind("test:", 0) == 0) {
        current = &spec.test_sets[section.substr(5)];
      } else {
        throw ParseError("unknown section [" + section + "]", line_no, 1);
      }
    } else {
      if (!current)
        throw ParseError("talk_id before any section header", line_no, 1);
      current->push_back(line);
    }
  }
  spec.validate();
  return spec;
}

void SplitSpec::validate() const {
  std::map<std::string, std::string> owner;
  auto claim = [&](const std::string& set_name, const std::vector<std::string>& ids) {
    for (const std::string& id : ids) {
      auto [it, inserted] = owner.emplace(id, set_name);
      if (!inserted && it->second != set_name)
        throw ValidationError("talk " + id + " listed in both " + it->second +
                              " and " + set_name);
    }
  };
  for (const auto& [name, ids] : dev_sets) claim("dev." + name, ids);
  for (const auto& [name, ids] : test_sets) claim("test." + name, ids);
}

std::map<std::string, std::vector<std::string>> partition(
    std::span<const std::string> talk_ids, const SplitSpec& spec) {
  spec.validate();
  std::set<std::string> available(talk_ids.begin(), talk_ids.end());
  if (available.size() != talk_ids.size())
    throw ValidationError("partition input contains duplicate talk ids");

  std::map<std::string, std::vector<std::string>> out;
  std::set<std::string> assigned;
  auto take = [&](const std::string& set_name, const std::vector<std::string>& ids) {
    std::vector<std::string>& dst = out[set_name];
    for (const std::string& id : ids)
      if (available.count(id)) {
        dst.push_back(id);
        assigned.insert(id);
      }
    std::sort(dst.begin(), dst.end());
  };
  for (const auto& [name, ids] : spec.dev_sets) take("dev." + name, ids);
  for (const auto& [name, ids] : spec.test_sets) take("test." + name, ids);

  std::set<std::string> excluded(spec.exclude_from_train.begin(),
                                 spec.exclude_from_train.end());
  std::vector<std::string>& train = out["train"];
  for (const std::string& id : available)
    if (!assigned.count(id) && !excluded.count(id)) train.push_back(id);
  return out;
}

LengthStats length_stats(std::span<const long> counts) {
  if (counts.empty()) throw ValidationError("length_stats requires a non-empty list");
  LengthStats stats;
  double sum = 0.0;
  long over = 0;
  for (long c : counts) {
    sum += static_cast<double>(c);
    stats.max = std::max(stats.max, c);
    if (c > 100) ++over;
  }
  const double n = static_cast<double>(counts.size());
  stats.mean = sum / n;
  double ss = 0.0;
  for (long c : counts) {
    double d = static_cast<double>(c) - stats.mean;
    ss += d * d;
  }
  stats.stddev = std::sqrt(ss / n);
  stats.per_mille_over_100 = 1000.0 * static_cast<double>(over) / n;
  return stats;
}

DiffStats diff_stats(std::span<const std::pair<long, long>> pairs) {
  if (pairs.empty()) throw ValidationError("diff_stats requires a non-empty list");
  DiffStats stats;
  double sum = 0.0;
  for (const auto& [a, b] : pairs) sum += static_cast<double>(a - b);
  const double n = static_cast<double>(pairs.size());
  stats.mean = sum / n;
  double ss = 0.0;
  for (const auto& [a, b] : pairs) {
    double d = static_cast<double>(a - b) - stats.mean;
    ss += d * d;
  }
  stats.stddev = std::sqrt(ss / n);
  return stats;
}

long export_bitext(std::span<const rebuild::SentenceUnit> units,
                   std::pair<rebuild::Stream, rebuild::Stream> sides,
                   const std::string& path_first, const std::string& path_second,
                   bool drop_divergent) {
  if (units.empty()) throw ValidationError("export_bitext requires non-empty units");
  {
    std::ofstream first(path_first, std::ios::binary | std::ios::trunc);
    if (!first) throw IoError("cannot open for writing", path_first);
    std::ofstream second(path_second, std::ios::binary | std::ios::trunc);
    if (!second) throw IoError("cannot open for writing", path_second);
    for (const rebuild::SentenceUnit& u : units) {
      if (drop_divergent && u.divergent) continue;
      first << unit_text(u, sides.first) << '\n';
      second << unit_text(u, sides.second) << '\n';
    }
    first.flush();
    second.flush();
    if (!first) throw IoError("write failed", path_first);
    if (!second) throw IoError("write failed", path_second);
  }
  long n1 = count_lines(path_first);
  long n2 = count_lines(path_second);
  if (n1 != n2)
    throw ValidationError("exported files disagree on line count: " + path_first +
                          " vs " + path_second);
  return n1;
}

std::string render_stats_table(
    const std::string& first_lang, const std::string& second_lang,
    std::span<const StatsRow> rows,
    std::span<const std::pair<std::string, DiffStats>> diff_rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %28s   %28s\n", "rebuild.",
                first_lang.c_str(), second_lang.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf, "%-14s %6s %6s %6s %7s   %6s %6s %6s %7s\n", "",
                "mu", "sigma", "max", "pm>100", "mu", "sigma", "max", "pm>100");
  out << buf;
  for (const StatsRow& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%-14s %6.1f %6.1f %6ld %7.2f   %6.1f %6.1f %6ld %7.2f\n",
                  r.label.c_str(), r.first.mean, r.first.stddev, r.first.max,
                  r.first.per_mille_over_100, r.second.mean, r.second.stddev,
                  r.second.max, r.second.per_mille_over_100);
    out << buf;
  }
  if (!diff_rows.empty()) {
    out << "\nlength difference (" << first_lang << " - " << second_lang << ")\n";
    std::snprintf(buf, sizeof buf, "%-14s %6s %6s\n", "rebuild.", "mu", "sigma");
    out << buf;
    for (const auto& [label, d] : diff_rows) {
      std::snprintf(buf, sizeof buf, "%-14s %6.2f %6.1f\n", label.c_str(), d.mean,
                    d.stddev);
      out << buf;
    }
  }
  return out.str();
}

std::string render_stats_tsv(
    const std::string& first_lang, const std::string& second_lang,
    std::span<const StatsRow> rows,
    std::span<const std::pair<std::string, DiffStats>> diff_rows) {
  std::ostringstream out;
  out << "rebuild\tlang\tmean\tstddev\tmax\tper_mille_over_100\n";
  for (const StatsRow& r : rows) {
    out << r.label << '\t' << first_lang << '\t' << format_real(r.first.mean)
        << '\t' << format_real(r.first.stddev) << '\t' << r.first.max << '\t'
        << format_real(r.first.per_mille_over_100) << '\n';
    out << r.label << '\t' << second_lang << '\t' << format_real(r.second.mean)
        << '\t' << format_real(r.second.stddev) << '\t' << r.second.max << '\t'
        << format_real(r.second.per_mille_over_100) << '\n';
  }
  for (const auto& [label, d] : diff_rows)
    out << label << "\tdiff(" << first_lang << '-' << second_lang << ")\t"
        << format_real(d.mean) << '\t' << format_real(d.stddev) << "\t\t\n";
  return out.str();
}

}  // namespace pivotalign::corpus
