#include "pivotalign/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "pivotalign/errors.hpp"
#include "pivotalign/ingest.hpp"
#include "pivotalign/textproc.hpp"

namespace fs = std::filesystem;

namespace pivotalign::pipeline {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed", path);
}

ingest::TalkCollection load_collection(const std::string& path,
                                       const std::string& format,
                                       const std::string& language) {
  if (format == "xml") {
    ingest::TalkCollection coll = ingest::parse_collection_xml(read_file(path));
    if (coll.language.empty()) coll.language = language;
    return coll;
  }
  if (format != "srt" && format != "vtt")
    throw ValidationError("unknown input format: " + format);
  if (!fs::is_directory(path))
    throw IoError(format + " input must be a directory of per-talk files", path);
  ingest::TalkCollection coll;
  coll.language = language;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == "." + format)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    std::string talk_id = file.stem().string();
    std::string content = read_file(file.string());
    coll.talks.push_back(format == "srt"
                             ? ingest::parse_srt(content, talk_id, language)
                             : ingest::parse_vtt(content, talk_id, language));
  }
  return coll;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(id);
  }
  return out;
}

std::vector<int> parse_ids(const std::string& s) {
  std::vector<int> ids;
  if (s.empty()) return ids;
  for (const std::string& part : split_on(s, ',')) ids.push_back(std::stoi(part));
  return ids;
}

// Runs fn(i) for i in [0, n), spread over `jobs` threads. Exceptions inside
// fn must be handled by fn itself.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  int workers = std::min<std::size_t>(std::max(jobs, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w)
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : threads) t.join();
}

void reset_dir(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
}

rebuild::PunctProfile load_punct(const PipelineConfig& config) {
  if (config.punct_path.empty()) return rebuild::PunctProfile::defaults();
  return rebuild::PunctProfile::from_json(read_file(config.punct_path));
}

corpus::SplitSpec load_split(const PipelineConfig& config) {
  if (config.split_path.empty()) return {};
  return corpus::SplitSpec::parse(read_file(config.split_path));
}

// Sorted talk ids of the .tsv files in a stage directory.
std::vector<std::string> stage_talk_ids(const fs::path& dir) {
  std::vector<std::string> ids;
  if (!fs::is_directory(dir)) return ids;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".tsv")
      ids.push_back(entry.path().stem().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Table 4 row order: original captions first, then strngP-style, then pivot.
int strategy_rank(const std::string& label) {
  if (label == "none") return 0;
  if (label.rfind("strong-punct", 0) == 0) return 1;
  if (label == "pivot") return 2;
  return 3;
}

double tsv_flag(const std::string& s) { return s == "1"; }

}  // namespace

void PipelineConfig::validate() const {
  if (lang_a.empty() || lang_b.empty())
    throw ValidationError("both non-pivot languages must be set");
  if (lang_a == lang_b || lang_a == pivot_lang || lang_b == pivot_lang)
    throw ValidationError("the three language codes must be distinct");
  if (jobs < 1) throw ValidationError("--jobs must be >= 1");
}

rebuild::RebuildStrategy parse_strategy(const std::string& text,
                                        const PipelineConfig& config) {
  if (text == "none") return rebuild::RebuildStrategy::none();
  if (text == "pivot") return rebuild::RebuildStrategy::pivot_punct();
  if (text.rfind("strong-punct:", 0) == 0) {
    std::string side = text.substr(13);
    if (side == "a" || side == config.lang_a)
      return rebuild::RebuildStrategy::strong_punct(rebuild::Stream::A);
    if (side == "b" || side == config.lang_b)
      return rebuild::RebuildStrategy::strong_punct(rebuild::Stream::B);
    if (side == "pivot" || side == config.pivot_lang)
      return rebuild::RebuildStrategy::strong_punct(rebuild::Stream::Pivot);
    throw ValidationError("unknown strategy side: " + side);
  }
  throw ValidationError("unknown strategy: " + text +
                        " (expected none, strong-punct:<side> or pivot)");
}

std::string triples_to_tsv(const std::string& talk_id,
                           const std::vector<pivot::AlignedTriple>& triples) {
  std::ostringstream out;
  for (const pivot::AlignedTriple& t : triples)
    out << talk_id << '\t' << join_ids(t.pivot_caption_ids) << '\t'
        << join_ids(t.a_caption_ids) << '\t' << join_ids(t.b_caption_ids) << '\t'
        << t.pivot_text << '\t' << t.a_text << '\t' << t.b_text << '\t'
        << (t.divergent ? 1 : 0) << '\n';
  return out.str();
}

std::vector<pivot::AlignedTriple> triples_from_tsv(std::string_view text) {
  std::vector<pivot::AlignedTriple> triples;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_on(line, '\t');
    if (fields.size() != 8)
      throw ParseError("triple dump line has " + std::to_string(fields.size()) +
                           " fields, expected 8",
                       line_no, 1);
    pivot::AlignedTriple t;
    t.pivot_caption_ids = parse_ids(fields[1]);
    t.a_caption_ids = parse_ids(fields[2]);
    t.b_caption_ids = parse_ids(fields[3]);
    t.pivot_text = fields[4];
    t.a_text = fields[5];
    t.b_text = fields[6];
    t.divergent = tsv_flag(fields[7]);
    triples.push_back(std::move(t));
  }
  return triples;
}

std::string sentences_to_tsv(const std::string& talk_id,
                             const std::vector<rebuild::SentenceUnit>& units) {
  std::ostringstream out;
  for (const rebuild::SentenceUnit& u : units)
    out << talk_id << '\t' << join_ids(u.source_triple_ids) << '\t'
        << u.pivot_text << '\t' << u.a_text << '\t' << u.b_text << '\t'
        << (u.divergent ? 1 : 0) << '\n';
  return out.str();
}

std::vector<rebuild::SentenceUnit> sentences_from_tsv(std::string_view text) {
  std::vector<rebuild::SentenceUnit> units;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_on(line, '\t');
    if (fields.size() != 6)
      throw ParseError("sentence dump line has " + std::to_string(fields.size()) +
                           " fields, expected 6",
                       line_no, 1);
    rebuild::SentenceUnit u;
    u.source_triple_ids = parse_ids(fields[1]);
    u.pivot_text = fields[2];
    u.a_text = fields[3];
    u.b_text = fields[4];
    u.divergent = tsv_flag(fields[5]);
    units.push_back(std::move(u));
  }
  return units;
}

int cmd_align(const PipelineConfig& config) {
  config.validate();
  for (const std::string& path :
       {config.pivot_a_path,
        config.pivot_b_path.empty() ? config.pivot_a_path : config.pivot_b_path,
        config.a_path, config.b_path}) {
    if (path.empty() || !fs::exists(path)) {
      std::cerr << "error: missing input file " << (path.empty() ? "<unset>" : path)
                << '\n';
      return kInputError;
    }
  }

  ingest::TalkCollection pa_coll, pb_coll, a_coll, b_coll;
  try {
    pa_coll = load_collection(config.pivot_a_path, config.format, config.pivot_lang);
    pb_coll = config.pivot_b_path.empty() || config.pivot_b_path == config.pivot_a_path
                  ? pa_coll
                  : load_collection(config.pivot_b_path, config.format,
                                    config.pivot_lang);
    a_coll = load_collection(config.a_path, config.format, config.lang_a);
    b_coll = load_collection(config.b_path, config.format, config.lang_b);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  std::vector<std::string> talk_ids =
      ingest::intersect_collections({pa_coll, pb_coll, a_coll, b_coll});
  if (talk_ids.empty()) {
    std::cerr << "error: no talks common to all inputs\n";
    return kEmptyResult;
  }

  const fs::path align_dir = fs::path(config.out_dir) / "align";
  reset_dir(align_dir);

  struct TalkOutcome {
    pivot::DivergenceReport report;
    std::string error;  // non-empty when the talk was skipped
  };
  std::vector<TalkOutcome> outcomes(talk_ids.size());

  parallel_for(talk_ids.size(), config.jobs, [&](std::size_t i) {
    const std::string& id = talk_ids[i];
    try {
      pivot::PivotAlignResult result = pivot::pivot_align(
          *pa_coll.find(id), *a_coll.find(id), *pb_coll.find(id),
          *b_coll.find(id), config.params);
      write_file((align_dir / (id + ".triples.tsv")).string(),
                 triples_to_tsv(id, result.triples));
      outcomes[i].report = result.report;
    } catch (const Error& e) {
      outcomes[i].error = e.what();
    }
  });

  pivot::DivergenceReport total;
  std::ostringstream tsv;
  tsv << "talk_id\ttotal_units\tdiffering_units\ttotal_words\tdiffering_words\t"
         "unit_rate\tword_rate\n";
  std::size_t failed = 0;
  char rate_buf[64];
  for (std::size_t i = 0; i < talk_ids.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      ++failed;
      std::cerr << "skipping talk " << talk_ids[i] << ": " << outcomes[i].error
                << '\n';
      continue;
    }
    const pivot::DivergenceReport& r = outcomes[i].report;
    total.total_units += r.total_units;
    total.differing_units += r.differing_units;
    total.total_words += r.total_words;
    total.differing_words += r.differing_words;
    std::snprintf(rate_buf, sizeof rate_buf, "%.6f\t%.6f", r.unit_rate, r.word_rate);
    tsv << talk_ids[i] << '\t' << r.total_units << '\t' << r.differing_units << '\t'
        << r.total_words << '\t' << r.differing_words << '\t' << rate_buf << '\n';
  }
  if (failed == talk_ids.size()) {
    std::cerr << "error: all " << failed << " talks failed alignment\n";
    return 1;
  }
  if (total.total_units > 0)
    total.unit_rate = static_cast<double>(total.differing_units) /
                      static_cast<double>(total.total_units);
  if (total.total_words > 0)
    total.word_rate = static_cast<double>(total.differing_words) /
                      static_cast<double>(total.total_words);
  std::snprintf(rate_buf, sizeof rate_buf, "%.6f\t%.6f", total.unit_rate,
                total.word_rate);
  tsv << "TOTAL\t" << total.total_units << '\t' << total.differing_units << '\t'
      << total.total_words << '\t' << total.differing_words << '\t' << rate_buf
      << '\n';
  write_file((align_dir / "divergence.tsv").string(), tsv.str());

  std::cout << "aligned " << (talk_ids.size() - failed) << " talks ("
            << failed << " skipped); step-2 divergence: " << total.differing_units
            << " of " << total.total_units << " units ("
            << pivot::render_percent(total.unit_rate) << "), "
            << total.differing_words << " of " << total.total_words << " words ("
            << pivot::render_percent(total.word_rate) << ")\n";
  return kOk;
}

int cmd_rebuild(const PipelineConfig& config) {
  config.validate();
  const fs::path align_dir = fs::path(config.out_dir) / "align";
  std::vector<std::string> talk_ids;
  for (const auto& entry :
       fs::is_directory(align_dir) ? fs::directory_iterator(align_dir)
                                   : fs::directory_iterator()) {
    const fs::path& p = entry.path();
    if (p.filename().string().ends_with(".triples.tsv"))
      talk_ids.push_back(p.filename().string().substr(
          0, p.filename().string().size() - 12));
  }
  std::sort(talk_ids.begin(), talk_ids.end());
  if (talk_ids.empty()) {
    std::cerr << "error: no align output under " << align_dir
              << " (run the align step first)\n";
    return kInputError;
  }

  rebuild::PunctProfile punct;
  try {
    punct = load_punct(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  const fs::path out_dir =
      fs::path(config.out_dir) / "rebuild" / config.strategy.label();
  reset_dir(out_dir);

  struct TalkOutcome {
    std::size_t triples = 0;
    std::size_t sentences = 0;
    std::string error;
  };
  std::vector<TalkOutcome> outcomes(talk_ids.size());
  parallel_for(talk_ids.size(), config.jobs, [&](std::size_t i) {
    const std::string& id = talk_ids[i];
    try {
      auto triples =
          triples_from_tsv(read_file((align_dir / (id + ".triples.tsv")).string()));
      auto units = rebuild::rebuild(triples, config.strategy, punct);
      write_file((out_dir / (id + ".tsv")).string(), sentences_to_tsv(id, units));
      outcomes[i].triples = triples.size();
      outcomes[i].sentences = units.size();
    } catch (const Error& e) {
      outcomes[i].error = e.what();
    }
  });

  std::size_t total_triples = 0, total_sentences = 0, failed = 0;
  for (std::size_t i = 0; i < talk_ids.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      ++failed;
      std::cerr << "skipping talk " << talk_ids[i] << ": " << outcomes[i].error
                << '\n';
      continue;
    }
    total_triples += outcomes[i].triples;
    total_sentences += outcomes[i].sentences;
  }
  if (failed == talk_ids.size()) {
    std::cerr << "error: all talks failed rebuilding\n";
    return 1;
  }
  std::cout << config.strategy.label() << ": " << total_sentences
            << " sentences from " << total_triples << " aligned units across "
            << (talk_ids.size() - failed) << " talks\n";
  return kOk;
}

int cmd_stats(const PipelineConfig& config) {
  config.validate();
  const fs::path rebuild_root = fs::path(config.out_dir) / "rebuild";
  std::vector<std::string> strategies;
  if (fs::is_directory(rebuild_root))
    for (const auto& entry : fs::directory_iterator(rebuild_root))
      if (entry.is_directory()) strategies.push_back(entry.path().filename().string());
  if (strategies.empty()) {
    std::cerr << "error: no rebuild output under " << rebuild_root
              << " (run the rebuild step first)\n";
    return kInputError;
  }
  std::sort(strategies.begin(), strategies.end(),
            [](const std::string& x, const std::string& y) {
              int rx = strategy_rank(x), ry = strategy_rank(y);
              return rx != ry ? rx < ry : x < y;
            });

  corpus::SplitSpec split;
  try {
    split = load_split(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  const textproc::LangProfile& prof_a = textproc::profile_for_language(config.lang_a);
  const textproc::LangProfile& prof_b = textproc::profile_for_language(config.lang_b);

  std::vector<corpus::StatsRow> rows;
  std::vector<std::pair<std::string, corpus::DiffStats>> diff_rows;
  for (const std::string& strategy : strategies) {
    const fs::path dir = rebuild_root / strategy;
    std::vector<std::string> talk_ids = stage_talk_ids(dir);
    auto sets = corpus::partition(talk_ids, split);
    const std::vector<std::string>& train = sets["train"];

    std::vector<long> a_counts, b_counts;
    std::vector<std::pair<long, long>> pairs;
    for (const std::string& id : train) {
      for (const rebuild::SentenceUnit& u :
           sentences_from_tsv(read_file((dir / (id + ".tsv")).string()))) {
        std::string a_text = textproc::normalize(u.a_text, prof_a);
        std::string b_text = textproc::normalize(u.b_text, prof_b);
        long na = static_cast<long>(textproc::tokenize(a_text, prof_a).size());
        long nb = static_cast<long>(textproc::tokenize(b_text, prof_b).size());
        a_counts.push_back(na);
        b_counts.push_back(nb);
        pairs.emplace_back(na, nb);
      }
    }
    if (a_counts.empty()) continue;
    rows.push_back({strategy, corpus::length_stats(a_counts),
                    corpus::length_stats(b_counts)});
    diff_rows.emplace_back(strategy, corpus::diff_stats(pairs));
  }
  if (rows.empty()) {
    std::cerr << "error: no train sentences to measure\n";
    return kEmptyResult;
  }

  std::string table =
      corpus::render_stats_table(config.lang_a, config.lang_b, rows, diff_rows);
  const fs::path stats_dir = fs::path(config.out_dir) / "stats";
  reset_dir(stats_dir);
  write_file((stats_dir / "report.txt").string(), table);
  write_file((stats_dir / "report.tsv").string(),
             corpus::render_stats_tsv(config.lang_a, config.lang_b, rows, diff_rows));
  std::cout << table;
  return kOk;
}

int cmd_partition(const PipelineConfig& config) {
  config.validate();
  const fs::path dir =
      fs::path(config.out_dir) / "rebuild" / config.strategy.label();
  std::vector<std::string> talk_ids = stage_talk_ids(dir);
  if (talk_ids.empty()) {
    std::cerr << "error: no rebuild output under " << dir
              << " (run the rebuild step first)\n";
    return kInputError;
  }

  corpus::SplitSpec split;
  std::map<std::string, std::vector<std::string>> sets;
  try {
    split = load_split(config);
    sets = corpus::partition(talk_ids, split);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  const fs::path part_dir = fs::path(config.out_dir) / "partition";
  reset_dir(part_dir);

  std::ostringstream manifest;
  manifest << "set\ttalks\tsentences\ttalk_ids\n";
  for (const auto& [set_name, ids] : sets) {
    if (ids.empty()) continue;
    std::vector<rebuild::SentenceUnit> units;
    for (const std::string& id : ids) {
      auto talk_units = sentences_from_tsv(read_file((dir / (id + ".tsv")).string()));
      units.insert(units.end(), talk_units.begin(), talk_units.end());
    }
    if (units.empty()) continue;
    const fs::path set_dir = part_dir / set_name;
    fs::create_directories(set_dir);
    long lines = corpus::export_bitext(
        units, {rebuild::Stream::A, rebuild::Stream::B},
        (set_dir / (config.lang_a + ".txt")).string(),
        (set_dir / (config.lang_b + ".txt")).string(), config.drop_divergent);
    std::string joined;
    for (const std::string& id : ids) {
      if (!joined.empty()) joined.push_back(',');
      joined += id;
    }
    manifest << set_name << '\t' << ids.size() << '\t' << lines << '\t' << joined
             << '\n';
  }
  write_file((part_dir / "manifest.tsv").string(), manifest.str());
  std::cout << "partitioned " << talk_ids.size() << " talks into " << sets.size()
            << " sets under " << part_dir.string() << '\n';
  return kOk;
}

int cmd_pipeline(const PipelineConfig& config) {
  if (int rc = cmd_align(config); rc != kOk) return rc;
  if (int rc = cmd_rebuild(config); rc != kOk) return rc;
  if (int rc = cmd_stats(config); rc != kOk) return rc;
  return cmd_partition(config);
}

}  // namespace pivotalign::pipeline
