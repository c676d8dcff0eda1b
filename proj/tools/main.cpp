#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specat/generic.hpp"
#include "specat/suites.hpp"
#include "specat/workspace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;   // validation or assertion failures
constexpr int kExitParse = 2;  // unparseable command line or input text

struct Options {
  int truncation = 2;
  int probe_bound = 6;
  int size_cap = 8;
  std::uint64_t seed = 20260801;
  std::string format = "text";
  std::vector<std::string> inputs;
};

specat::Workspace make_workspace(const Options& opt) {
  specat::Workspace ws;
  ws.config.truncation = opt.truncation;
  ws.config.probe_bound = opt.probe_bound;
  ws.config.size_cap = opt.size_cap;
  ws.config.seed = opt.seed;
  for (const auto& path : opt.inputs) ws.load_file(path);
  return ws;
}

int cmd_validate(const Options& opt, const std::vector<std::string>& files) {
  specat::Workspace ws = make_workspace(opt);
  for (const auto& path : files) ws.load_file(path);
  std::cout << "ok: " << ws.cats_.size() << " categories, " << ws.sheaves_.size()
            << " presheaves, " << ws.species_.size() << " species, " << ws.linear_.size()
            << " linear species\n";
  return kExitOk;
}

int cmd_eval(const Options& opt, const std::string& species_name,
             const std::string& presheaf_name, int at) {
  specat::Workspace ws = make_workspace(opt);
  specat::Species p = ws.resolve_species(species_name);
  specat::Presheaf x = ws.has_presheaf(presheaf_name)
                           ? ws.presheaf(presheaf_name)
                           : specat::label_set(std::stoi(presheaf_name));
  specat::LanEval e(p, x);
  const specat::FinCat& bc = *p.cod_base;
  for (int b = 0; b < bc.object_count(); ++b) {
    if (at >= 0 && b != at) continue;
    std::cout << "at " << bc.object_name(b) << ": " << e.class_count(b) << " classes\n";
    for (int cls = 0; cls < e.class_count(b); ++cls)
      std::cout << "  " << cls << ": " << e.describe(b, cls) << "\n";
  }
  return kExitOk;
}

int cmd_count(const Options& opt, const std::string& species_name, int labels) {
  specat::Workspace ws = make_workspace(opt);
  specat::ClassicalSpecies p = specat::as_classical(ws.resolve_species(species_name));
  auto lab = specat::count_labelled(p, labels);
  auto unl = specat::count_unlabelled(p);
  std::cout << "# degree labelled@" << labels << " unlabelled\n";
  for (std::size_t n = 0; n < lab.size(); ++n)
    std::cout << n << " " << lab[n] << " " << unl[n] << "\n";
  return kExitOk;
}

int cmd_suite(const Options& opt, const std::string& name) {
  specat::SuiteConfig cfg;
  cfg.truncation = opt.truncation;
  cfg.probe_bound = opt.probe_bound;
  cfg.size_cap = opt.size_cap;
  cfg.seed = opt.seed;
  specat::SuiteReport report = specat::run_suite(name, cfg);
  std::cout << (opt.format == "json" ? specat::render_json(report)
                                     : specat::render_text(report));
  return report.passed ? kExitOk : kExitFail;
}

int cmd_compose(const Options& opt, const std::string& p_name, const std::string& q_name,
                int degree) {
  specat::Workspace ws = make_workspace(opt);
  specat::Species p = ws.resolve_species(p_name);
  specat::Species q = ws.resolve_species(q_name);
  specat::ComposeResult r = specat::compose_analytic(p, q, degree, opt.probe_bound);
  if (!r.ok) {
    std::cout << "compose failed: " << r.failure << "\n";
    return kExitFail;
  }
  const specat::FinCat& kc = *r.composite.cod_base;
  std::cout << "composite species of degree " << r.composite.degree << "\n";
  for (int w = 0; w < r.composite.word_count(); ++w) {
    std::cout << "word [";
    for (int i = 0; i < r.composite.words[w].size(); ++i) {
      if (i) std::cout << ",";
      std::cout << r.composite.dom_base->object_name(r.composite.words[w].letters[i]);
    }
    std::cout << "] ->";
    for (int k = 0; k < kc.object_count(); ++k)
      std::cout << " " << r.composite.coeff[w].card[k];
    std::cout << "\n";
  }
  std::cout << "extensional certificate: pass\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"species of structures and analytic functors over finite groupoids"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--truncation", opt.truncation, "degree bound for catalog species");
  app.add_option("--probe-bound", opt.probe_bound, "probe family size bound");
  app.add_option("--size-cap", opt.size_cap, "per-object carrier cap for enumerations");
  app.add_option("--seed", opt.seed, "seed for the randomized suites");
  app.add_option("--format", opt.format, "report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* validate = app.add_subcommand("validate", "load definition files and validate");
  std::vector<std::string> files;
  validate->add_option("files", files, "definition files")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a species at a presheaf");
  std::string species_name, presheaf_name;
  int at = -1;
  eval->add_option("species", species_name)->required();
  eval->add_option("presheaf", presheaf_name)->required();
  eval->add_option("--at", at, "restrict to one cod object");
  eval->add_option("--in", opt.inputs, "definition files to load");

  auto* count = app.add_subcommand("count", "labelled and unlabelled count table");
  std::string count_species;
  int labels = 2;
  count->add_option("species", count_species)->required();
  count->add_option("--labels", labels, "label set size");
  count->add_option("--in", opt.inputs, "definition files to load");

  auto* suite = app.add_subcommand("suite", "run a named verification suite");
  std::string suite_name;
  suite->add_option("name", suite_name)->required()
      ->check(CLI::IsMember(specat::suite_names()));

  auto* compose = app.add_subcommand("compose", "compose two species");
  std::string p_name, q_name;
  int degree = -1;
  compose->add_option("P", p_name)->required();
  compose->add_option("Q", q_name)->required();
  compose->add_option("--degree", degree, "output degree (defaults to the truncation)");
  compose->add_option("--in", opt.inputs, "definition files to load");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? kExitOk : kExitParse;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt, files);
    if (eval->parsed()) return cmd_eval(opt, species_name, presheaf_name, at);
    if (count->parsed()) return cmd_count(opt, count_species, labels);
    if (suite->parsed()) return cmd_suite(opt, suite_name);
    if (compose->parsed())
      return cmd_compose(opt, p_name, q_name, degree < 0 ? opt.truncation : degree);
  } catch (const specat::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitParse;
}
