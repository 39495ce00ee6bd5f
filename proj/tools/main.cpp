#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pivotalign/errors.hpp"
#include "pivotalign/pipeline.hpp"

using pivotalign::pipeline::PipelineConfig;

int main(int argc, char** argv) {
  CLI::App app{
      "pivotalign - builds a parallel corpus for two languages by "
      "synchronizing their subtitles through a pivot language"};
  app.require_subcommand(1);
  app.fallthrough();  // accept shared options after the subcommand name

  PipelineConfig config;
  std::string langs;
  std::string strategy_text = "pivot";
  int band_width = 0;

  app.add_option("--pivot-lang", config.pivot_lang, "Pivot language code")
      ->capture_default_str();
  app.add_option("--langs", langs, "The two non-pivot language codes, e.g. ar,he")
      ->required();
  app.add_option("--pivot-a", config.pivot_a_path,
                 "Pivot-language input as paired with language A");
  app.add_option("--pivot-b", config.pivot_b_path,
                 "Pivot-language input as paired with language B "
                 "(defaults to --pivot-a)");
  app.add_option("--input-a", config.a_path, "Language A input");
  app.add_option("--input-b", config.b_path, "Language B input");
  app.add_option("--format", config.format, "Input format: xml, srt or vtt")
      ->check(CLI::IsMember({"xml", "srt", "vtt"}))
      ->capture_default_str();
  app.add_option("--strategy", strategy_text,
                 "Sentence rebuilding: none, strong-punct:<side> or pivot")
      ->capture_default_str();
  app.add_option("--punct", config.punct_path,
                 "Punctuation profile JSON (strong/closers code point lists)");
  app.add_option("--split", config.split_path, "Train/dev/test split spec file");
  app.add_flag("--drop-divergent", config.drop_divergent,
               "Drop units whose pivot sides disagree from exported bitext");
  app.add_option("--jobs", config.jobs, "Worker threads for per-talk stages")
      ->capture_default_str();
  app.add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  app.add_option("--band-width", band_width,
                 "DP search band (0 = automatic)");
  app.add_flag("--lexical-pass", config.params.lexical_pass,
               "Run the lexical refinement pass in step 1 too");
  app.add_option("--lexical-weight", config.params.lexical_weight,
                 "Weight of the token-overlap cost in the lexical pass")
      ->capture_default_str();

  auto* align = app.add_subcommand("align", "Pivot-align all common talks");
  auto* rebuild = app.add_subcommand("rebuild", "Rebuild sentences from aligned units");
  auto* stats = app.add_subcommand("stats", "Sentence length statistics per strategy");
  auto* partition =
      app.add_subcommand("partition", "Write train/dev/test bitext directories");
  auto* pipeline = app.add_subcommand("pipeline", "Run all stages in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : pivotalign::pipeline::kInputError;
  }

  try {
    auto comma = langs.find(',');
    if (comma == std::string::npos)
      throw pivotalign::ValidationError("--langs expects two codes, e.g. ar,he");
    config.lang_a = langs.substr(0, comma);
    config.lang_b = langs.substr(comma + 1);
    if (band_width > 0) config.params.band_width = band_width;
    config.strategy = pivotalign::pipeline::parse_strategy(strategy_text, config);
    config.validate();

    if (align->parsed()) return pivotalign::pipeline::cmd_align(config);
    if (rebuild->parsed()) return pivotalign::pipeline::cmd_rebuild(config);
    if (stats->parsed()) return pivotalign::pipeline::cmd_stats(config);
    if (partition->parsed()) return pivotalign::pipeline::cmd_partition(config);
    if (pipeline->parsed()) return pivotalign::pipeline::cmd_pipeline(config);
  } catch (const pivotalign::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pivotalign::pipeline::kInputError;
  }
  return 0;
}
