#include "pivotalign/pivot.hpp"

#include <cstdio>

#include "pivotalign/errors.hpp"
#include "pivotalign/unicode.hpp"

namespace pivotalign::pivot {

namespace {

std::string join_captions(const ingest::Talk& talk, int begin, int end) {
  std::string out;
  for (int i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += talk.captions[i].text;
  }
  return out;
}

long whitespace_token_count(const std::string& text) {
  long n = 0;
  bool in_token = false;
  for (char c : text) {
    bool ws = c == ' ' || c == '\t';
    if (!ws && !in_token) ++n;
    in_token = !ws;
  }
  return n;
}

std::vector<int> index_range(int begin, int end) {
  std::vector<int> ids;
  ids.reserve(end - begin);
  for (int i = begin; i < end; ++i) ids.push_back(i);
  return ids;
}

}  // namespace

std::string render_percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
  return buf;
}

aligner::AlignmentMap invert(const aligner::AlignmentMap& map) {
  aligner::AlignmentMap out;
  out.src_len = map.tgt_len;
  out.tgt_len = map.src_len;
  out.beads.reserve(map.beads.size());
  for (const aligner::Bead& b : map.beads)
    out.beads.push_back({b.tgt_begin, b.tgt_end, b.src_begin, b.src_end, b.cost});
  out.validate();
  return out;
}

DivergenceReport measure_divergence(const aligner::AlignmentMap& map_pp,
                                    const ingest::Talk& pivot_a,
                                    const ingest::Talk& pivot_b) {
  map_pp.validate();
  DivergenceReport report;
  for (const aligner::Bead& bead : map_pp.beads) {
    std::string side_a = unicode::normalize_whitespace(
        join_captions(pivot_a, bead.src_begin, bead.src_end));
    std::string side_b = unicode::normalize_whitespace(
        join_captions(pivot_b, bead.tgt_begin, bead.tgt_end));
    long words = whitespace_token_count(side_a);
    ++report.total_units;
    report.total_words += words;
    if (side_a != side_b) {
      ++report.differing_units;
      report.differing_words += words;
    }
  }
  if (report.total_units > 0)
    report.unit_rate = static_cast<double>(report.differing_units) /
                       static_cast<double>(report.total_units);
  if (report.total_words > 0)
    report.word_rate = static_cast<double>(report.differing_words) /
                       static_cast<double>(report.total_words);
  return report;
}

PivotAlignResult pivot_align(const ingest::Talk& pivot_a, const ingest::Talk& a,
                             const ingest::Talk& pivot_b, const ingest::Talk& b,
                             const aligner::AlignerParams& params) {
  if (pivot_a.captions.empty() || a.captions.empty() || pivot_b.captions.empty() ||
      b.captions.empty())
    throw ValidationError("pivot_align requires non-empty talks");

  const auto pa_texts = pivot_a.texts();
  const auto pb_texts = pivot_b.texts();
  const auto a_texts = a.texts();
  const auto b_texts = b.texts();

  PivotAlignResult result;

  // Step 1: pivot to A, pivot to B.
  result.map_pa = aligner::align(pa_texts, a_texts, params);
  result.map_pb = aligner::align(pb_texts, b_texts, params);
  if (params.lexical_pass) {
    result.map_pa = aligner::lexical_refine(result.map_pa, pa_texts, a_texts, params);
    result.map_pb = aligner::lexical_refine(result.map_pb, pb_texts, b_texts, params);
  }

  // Step 2: the two pivot sides against each other, lexical pass always on
  // (same language on both sides, token overlap is the strongest signal).
  aligner::AlignerParams pp_params = params;
  pp_params.lexical_pass = true;
  result.map_pp = aligner::align(pa_texts, pb_texts, pp_params);
  result.map_pp =
      aligner::lexical_refine(result.map_pp, pa_texts, pb_texts, pp_params);

  result.report = measure_divergence(result.map_pp, pivot_a, pivot_b);

  // Step 3: compose the chain A <- pivot_a <- pivot_b <- B. The middle index
  // space of the outer composition is the pivot_a caption sequence.
  aligner::AlignmentMap pa_to_b =
      aligner::compose(result.map_pp, result.map_pb);
  std::vector<aligner::ComposedBead> components =
      aligner::compose_with_mid(invert(result.map_pa), pa_to_b);

  // Per-unit divergence of the step-2 beads, for flagging the triples.
  std::vector<bool> bead_differs(result.map_pp.beads.size(), false);
  for (std::size_t i = 0; i < result.map_pp.beads.size(); ++i) {
    const aligner::Bead& bead = result.map_pp.beads[i];
    bead_differs[i] =
        unicode::normalize_whitespace(
            join_captions(pivot_a, bead.src_begin, bead.src_end)) !=
        unicode::normalize_whitespace(
            join_captions(pivot_b, bead.tgt_begin, bead.tgt_end));
  }

  std::size_t pp_cursor = 0;
  result.triples.reserve(components.size());
  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    const aligner::ComposedBead& comp = components[ci];
    AlignedTriple triple;
    triple.a_caption_ids = index_range(comp.bead.src_begin, comp.bead.src_end);
    triple.pivot_caption_ids = index_range(comp.mid_begin, comp.mid_end);
    triple.b_caption_ids = index_range(comp.bead.tgt_begin, comp.bead.tgt_end);
    triple.a_text = join_captions(a, comp.bead.src_begin, comp.bead.src_end);
    triple.pivot_text = join_captions(pivot_a, comp.mid_begin, comp.mid_end);
    triple.b_text = join_captions(b, comp.bead.tgt_begin, comp.bead.tgt_end);

    // Step-2 bead boundaries refine the component boundaries, so whole pp
    // beads fall inside each component; empty-source pp beads at a boundary
    // belong to the following component.
    bool last = ci + 1 == components.size();
    while (pp_cursor < result.map_pp.beads.size()) {
      const aligner::Bead& bead = result.map_pp.beads[pp_cursor];
      bool empty_src = bead.src_begin == bead.src_end;
      bool take;
      if (empty_src)
        take = bead.src_begin < comp.mid_end ||
               (last && bead.src_begin == comp.mid_end);
      else
        take = bead.src_end <= comp.mid_end;
      if (!take) break;
      if (bead_differs[pp_cursor]) triple.divergent = true;
      ++pp_cursor;
    }
    result.triples.push_back(std::move(triple));
  }
  return result;
}

}  // namespace pivotalign::pivot
