/*
   Copyright 2026 The citeconc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "citeconc/config.hpp"
#include "citeconc/corpus_io.hpp"
#include "citeconc/report.hpp"
#include "citeconc/studies.hpp"
#include "citeconc/synthgen.hpp"
#include "json.hpp"

namespace citeconc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

inline int run_validate(const std::filesystem::path& articles, const std::filesystem::path& edges,
                        std::optional<YearRange> span, std::ostream& out, std::ostream& err) {
  try {
    auto a = open_input(articles);
    auto e = open_input(edges);
    const auto rep = scan_tables(a, e, span.value_or(YearRange{}));
    out << "articles: rows=" << rep.article_rows << " retained=" << rep.articles_retained << '\n';
    out << "edges: rows=" << rep.edge_rows << " retained=" << rep.edges_retained << '\n';
    out << "span: " << rep.span.first << '-' << rep.span.last << '\n';
    out << "dropped:\n";
    out << "  duplicate_id: " << rep.drops.duplicate_id << '\n';
    out << "  out_of_span: " << rep.drops.out_of_span << '\n';
    out << "  self_loop: " << rep.drops.self_loop << '\n';
    out << "  dangling: " << rep.drops.dangling << '\n';
    out << "  future_dated: " << rep.drops.future_dated << '\n';
    out << "  duplicate_edge: " << rep.drops.duplicate_edge << '\n';
    out << "by_year:\n";
    for (const auto& [y, n] : rep.by_year) out << "  " << y << ": " << n << '\n';
    out << "by_field:\n";
    for (const auto& [f, n] : rep.by_field) out << "  " << f << ": " << n << '\n';
    out << "by_region:\n";
    for (const auto& [r, n] : rep.by_region) out << "  " << r << ": " << n << '\n';
    if (rep.drops.duplicate_id > 0) {
      err << "error: " << rep.drops.duplicate_id << " duplicate article id(s)\n";
      return kData;
    }
    return kOk;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

inline void print_corpus_summary(const Corpus& c, std::ostream& out) {
  std::size_t self = 0;
  for (int y = c.span().first; y <= c.span().last; ++y) self += c.self_edges_in_year(y);
  out << "articles: " << c.num_articles() << '\n';
  out << "edges: " << c.num_edges() << '\n';
  out << "self_citations: " << self << '\n';
  out << "span: " << c.span().first << '-' << c.span().last << '\n';
}

struct GenerateRequest {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<YearRange> span;
  std::vector<std::pair<std::string, std::string>> overrides;  // generator.* keys
  std::filesystem::path out_dir;
};

inline int run_generate(const GenerateRequest& req, std::ostream& out, std::ostream& err) {
  GenParams p;
  try {
    p = scenario(req.scenario);
    if (req.span) p.span = *req.span;
    if (req.seed) p.seed = *req.seed;
    for (const auto& [k, v] : req.overrides) {
      if (!apply_generator_key(p, k, v)) throw ConfigError("unknown generator key '" + k + "'");
    }
    p.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    GenStats stats;
    const Corpus c = generate(p, &stats);
    std::filesystem::create_directories(req.out_dir);
    std::ostringstream a, e;
    write_articles(c, a);
    write_edges(c, e);
    write_atomic(req.out_dir / "articles.tsv", a.str());
    write_atomic(req.out_dir / "edges.tsv", e.str());
    out << "scenario: " << req.scenario << '\n';
    out << "seed: " << p.seed << '\n';
    print_corpus_summary(c, out);
    out << "clamped_articles: " << stats.clamped_articles << '\n';
    out << "external_refs: " << stats.external_refs << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

namespace detail {

struct Emitted {
  std::string stem;
  SeriesReport report;
};

inline std::vector<Emitted> run_study(const Corpus& corpus, const StudySpec& s) {
  std::vector<Emitted> out;
  const auto& cfg = s.config;
  const auto stem = report_stem(s.name, cfg);
  switch (s.kind) {
    case StudyKind::gini:
      out.push_back({stem, gini_series(corpus, cfg)});
      break;
    case StudyKind::gini_by_field:
      for (auto& [field, rep] : gini_by_field(corpus, cfg)) {
        out.push_back({stem + "-f" + file_safe(field), std::move(rep)});
      }
      break;
    case StudyKind::uncited:
      out.push_back({stem, uncited_share_series(corpus, cfg.window, cfg.exclude_self_citations, cfg.core_only)});
      break;
    case StudyKind::region_removal:
      out.push_back({stem, region_removal_uncitedness(corpus, *cfg.region_removed, cfg.window,
                                                      cfg.exclude_self_citations, cfg.core_only)});
      break;
    case StudyKind::region_tail: {
      TailOptions t;
      t.exclude_self = cfg.exclude_self_citations;
      t.normalized = cfg.normalized;
      t.article_level = s.tail_article_level;
      t.core_only = cfg.core_only;
      out.push_back({stem, region_tail_shares(corpus, cfg.window, t)});
      break;
    }
    case StudyKind::top_share:
      out.push_back({stem, top_share_series(corpus, cfg.window, s.pcts, cfg.exclude_self_citations, cfg.core_only)});
      break;
    case StudyKind::lorenz:
      out.push_back({stem, lorenz_series(corpus, cfg, s.lorenz_points)});
      break;
  }
  for (auto& e : out) {
    e.report.config.insert(e.report.config.begin(), {"study.kind", std::string(to_string(s.kind))});
    e.report.config.insert(e.report.config.begin(), {"study.name", s.name});
    e.report.study = s.name;
  }
  return out;
}

}  // namespace detail

/// Runs every study of a config file and writes CSV/JSON reports plus manifest.json.
inline int run_analyze(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  try {
    rc = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  nlohmann::ordered_json manifest;
  Corpus corpus;
  try {
    if (rc.generator) {
      corpus = generate(*rc.generator);
    } else {
      CorpusOptions opt;
      opt.span = rc.span;
      opt.regions = rc.regions;
      corpus = load_corpus_files(*rc.articles_path, *rc.edges_path, opt);
    }
    std::filesystem::create_directories(rc.output_dir);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }

  nlohmann::ordered_json src;
  if (rc.generator) {
    src["source"] = "generator";
    src["seed"] = rc.generator->seed;
  } else {
    src["source"] = "files";
    src["articles_file"] = rc.articles_path->filename().string();
    src["edges_file"] = rc.edges_path->filename().string();
  }
  src["span"] = {corpus.span().first, corpus.span().last};
  src["articles"] = corpus.num_articles();
  src["edges"] = corpus.num_edges();
  const auto& drops = corpus.provenance().drops;
  src["dropped"] = {{"duplicate_id", drops.duplicate_id}, {"out_of_span", drops.out_of_span},
                    {"self_loop", drops.self_loop},       {"dangling", drops.dangling},
                    {"future_dated", drops.future_dated}, {"duplicate_edge", drops.duplicate_edge}};
  manifest["corpus"] = std::move(src);
  auto outputs = nlohmann::ordered_json::array();
  auto failures = nlohmann::ordered_json::array();

  int code = kOk;
  for (const auto& spec : rc.studies) {
    std::vector<detail::Emitted> emitted;
    try {
      emitted = detail::run_study(corpus, spec);
    } catch (const ConfigError& e) {
      failures.push_back({{"study", spec.name}, {"stem", report_stem(spec.name, spec.config)}, {"error", e.what()}});
      code = kUsage;
      continue;
    } catch (const Error& e) {
      failures.push_back({{"study", spec.name}, {"stem", report_stem(spec.name, spec.config)}, {"error", e.what()}});
      code = std::max(code, static_cast<int>(kData));
      continue;
    }
    for (const auto& e : emitted) {
      const auto hash = config_hash(e.report.config);
      auto record = [&](const std::string& file, const char* format, const std::string& content) {
        write_atomic(rc.output_dir / file, content);
        outputs.push_back({{"study", spec.name},
                           {"kind", std::string(to_string(spec.kind))},
                           {"file", file},
                           {"format", format},
                           {"config_hash", hash},
                           {"columns", csv_header(e.report)},
                           {"rows", e.report.rows.size()}});
        out << "wrote " << file << '\n';
      };
      if (rc.emit_csv) {
        std::ostringstream s;
        write_csv(e.report, s);
        record(e.stem + ".csv", "csv", s.str());
      }
      if (rc.emit_json) {
        std::ostringstream s;
        write_json(e.report, s);
        record(e.stem + ".json", "json", s.str());
      }
    }
  }
  manifest["outputs"] = std::move(outputs);
  manifest["errors"] = std::move(failures);
  write_atomic(rc.output_dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote manifest.json\n";
  if (code != kOk) err << "error: " << manifest["errors"].size() << " study run(s) failed; see manifest.json\n";
  return code;
}

}  // namespace citeconc::cli
