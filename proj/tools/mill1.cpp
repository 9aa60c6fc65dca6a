// mill1: proof search, parsing and translation from the command line.
//
// Exit codes: 0 success, 1 unprovable, 2 syntax, 3 resources, 4 lexicon,
// 5 property failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "mill1/errors.hpp"
#include "mill1/grammar.hpp"
#include "mill1/oracle.hpp"
#include "mill1/proofnet.hpp"
#include "mill1/prover.hpp"
#include "mill1/semantics.hpp"
#include "mill1/translate.hpp"

namespace {

using namespace mill1;

enum Exit { kOk = 0, kUnprovable = 1, kSyntax = 2, kResources = 3, kLexicon = 4, kProperty = 5 };

struct Common {
  bool machine = false;
  bool stats = false;
  std::size_t limit = 0;
  int jobs = 1;
  std::string dot_dir;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_dot(const std::string& dir, const std::string& name, const std::string& dot) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  out << dot;
}

std::string matching_str(const ProofStructure& ps, VarNames& names) {
  std::string out;
  for (const auto& [a, b] : ps.matching) {
    if (!out.empty()) out += "  ";
    out += ps.frame.literal_str(a, ps.subst, names) + "~" + ps.frame.literal_str(b, ps.subst, names);
  }
  return out;
}

void print_stats(const SearchStats& s, bool machine) {
  if (!machine) {
    std::cout << s.str();
    return;
  }
  std::cout << "expansions=" << s.expansions << "\n";
  for (const auto& [r, n] : s.prunes) std::cout << "pruned." << prune_reason_name(r) << "=" << n << "\n";
  std::cout << "seconds=" << s.seconds << "\n";
}

int cmd_prove(const std::string& text, const std::string& file, const Common& c, bool render) {
  const Sequent seq = parse_sequent(file.empty() ? text : read_file(file));
  ProveOptions o;
  o.limit = c.limit;
  o.jobs = c.jobs;
  ProveResult r = prove(seq.antecedent, seq.succedent, o);
  const std::size_t n = r.proofs.size();
  if (render) {
    if (n == 0) {
      std::cerr << "no proof to render\n";
      return kUnprovable;
    }
    std::cout << render_dot(r.proofs.front());
    return kOk;
  }
  if (c.machine) {
    std::cout << "proofs=" << n << "\n";
  } else {
    std::cout << sequent_str(seq) << "\n" << n << (n == 1 ? " proof" : " proofs") << "\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    VarNames names;
    if (c.machine) std::cout << "proof." << i << "=" << matching_str(r.proofs[i], names) << "\n";
    else std::cout << "  " << i + 1 << ": " << matching_str(r.proofs[i], names) << "\n";
    if (!c.dot_dir.empty())
      write_dot(c.dot_dir, "proof" + std::to_string(i + 1) + ".dot", render_dot(r.proofs[i]));
  }
  if (c.stats) print_stats(r.stats, c.machine);
  return n ? kOk : kUnprovable;
}

int cmd_parse(const std::string& lexicon, const std::vector<std::string>& words,
              const std::string& goal, int base, bool allow_nonsimple, bool trace,
              const Common& c) {
  Lexicon lex = load_lexicon(lexicon);
  for (const auto& w : lex.warnings) std::cerr << "warning: " << w << "\n";
  std::string text;
  for (const auto& w : words) text += w + " ";
  const Sentence s = make_sentence(text, base >= 0 ? base : lex.base);
  ParseOptions o;
  o.limit = c.limit;
  o.allow_nonsimple = allow_nonsimple;
  o.prove.jobs = c.jobs;
  o.prove.record_selections = trace;
  ParseResult r = parse(lex, s, goal, o);
  const std::size_t n = r.readings.size();
  if (c.machine) {
    std::cout << "parses=" << n << "\n" << "sequents=" << r.sequents << "\n";
  } else {
    std::cout << n << (n == 1 ? " parse" : " parses") << "\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Reading& rd = r.readings[i];
    VarNames names;
    const std::string goal_str = names.formula(rd.lexical.sequent.succedent);
    std::string term = rd.term ? rd.term->str() : "";
    std::string type = rd.term_type ? rd.term_type->str() : "ill-typed: " + rd.term_error;
    if (c.machine) {
      std::cout << "parse." << i << ".goal=" << goal_str << "\n";
      std::cout << "parse." << i << ".term=" << term << "\n";
      std::cout << "parse." << i << ".type=" << type << "\n";
    } else {
      std::cout << "reading " << i + 1 << ": " << goal_str << "\n";
      std::cout << "  term: " << term << "\n";
      std::cout << "  type: " << type << "\n";
      std::cout << "  axioms: " << matching_str(rd.net, names) << "\n";
    }
    if (!c.dot_dir.empty())
      write_dot(c.dot_dir, "parse" + std::to_string(i + 1) + ".dot", render_dot(rd.net));
  }
  if (trace) {
    std::cout << (c.machine ? "selections=" : "conjugates per step:");
    for (const auto& st : r.stats.selections) std::cout << " " << st.conjugates;
    std::cout << "\n";
  }
  if (c.stats) print_stats(r.stats, c.machine);
  return n ? kOk : kUnprovable;
}

int cmd_translate(const std::string& lexicon, const std::string& word, const std::string& formula,
                  const std::vector<int>& pos, bool drop, bool unicode, bool nonassoc, int scope) {
  MillFormula out;
  if (scope > 0) {
    const int p0 = pos.size() == 2 ? pos[0] : 0, p1 = pos.size() == 2 ? pos[1] : 1;
    out = translate_scope(scope, Term::integer(p0), Term::integer(p1));
  } else if (!formula.empty()) {
    DFormula d = parse_d(formula);
    if (nonassoc) {
      out = translate_nonassoc(d);
    } else {
      AtomSortTable st;
      if (!lexicon.empty()) st = load_lexicon(lexicon).sorts;
      std::vector<Term> positions;
      if (pos.empty()) {
        for (int i = 0; i < position_arity(d, st); ++i) positions.push_back(fresh_var("P"));
      } else {
        for (int p : pos) positions.push_back(Term::integer(p));
      }
      out = universal_closure(translate_d(d, positions, st), [&] {
        std::set<VarId> keep;
        for (const Term& t : positions) t.collect_vars(keep);
        return keep;
      }());
    }
  } else {
    if (lexicon.empty() || word.empty()) throw CLI::ValidationError("translate needs --lexicon and a word, or --formula");
    Lexicon lex = load_lexicon(lexicon);
    const auto* entries = lex.lookup(word);
    if (!entries) throw LexiconError("unknown word: " + word);
    const int l = pos.size() == 2 ? pos[0] : lex.base;
    const int r = pos.size() == 2 ? pos[1] : l + 1;
    for (const LexEntry& e : *entries) {
      MillFormula f = lexical_formula(lex, e, l, r);
      if (drop) f = drop_quantifiers(f);
      std::cout << (unicode ? f.unicode() : f.str()) << "\n";
    }
    return kOk;
  }
  if (drop) out = drop_quantifiers(out);
  std::cout << (unicode ? out.unicode() : out.str()) << "\n";
  return kOk;
}

int cmd_oracle(int max_async, int trials, int orders, unsigned long long seed, bool machine) {
  Rng rng(seed);
  RandomConfig cfg;
  int checked = 0, nets = 0, criterion = 0, confluence = 0;
  while (checked < trials) {
    auto ps = random_structure(rng, cfg, max_async);
    if (!ps) continue;
    ++checked;
    const ContractionGraph g = to_contraction_graph(*ps);
    const bool verdict = contract(g).net;
    nets += verdict;
    bool bad = false;
    if (verdict != check_switchings(*ps)) {
      ++criterion;
      bad = true;
    }
    for (int k = 0; k < orders; ++k) {
      ContractOptions o;
      o.random_order = true;
      o.seed = rng();
      if (contract(g, o).net != verdict) {
        ++confluence;
        bad = true;
        break;
      }
    }
    if (bad) {
      std::cerr << "disagreement on structure with conclusions:";
      for (const auto& f : ps->conclusion_formulas()) std::cerr << " [" << f.str() << "]";
      std::cerr << "\n" << render_dot(*ps);
    }
  }
  if (machine) {
    std::cout << "structures=" << checked << "\nnets=" << nets << "\ncriterion_disagreements="
              << criterion << "\nconfluence_disagreements=" << confluence << "\n";
  } else {
    std::cout << checked << " structures, " << nets << " nets\n"
              << criterion << " criterion disagreements\n"
              << confluence << " confluence disagreements\n";
  }
  return criterion + confluence ? kProperty : kOk;
}

int cmd_cutelim(int trials, unsigned long long seed, bool machine) {
  Rng rng(seed);
  int ok = 0, failed = 0;
  CutStats total;
  for (int i = 0; i < trials; ++i) {
    const ProofStructure composed = random_cut_composition(rng, i);
    CutStats st;
    const ProofStructure out = eliminate_cut(composed, &st);
    total.axiom += st.axiom;
    total.multiplicative += st.multiplicative;
    total.quantifier += st.quantifier;
    const auto before = composed.conclusion_formulas(), after = out.conclusion_formulas();
    bool same = before.size() == after.size();
    for (std::size_t k = 0; same && k < before.size(); ++k) same = alpha_equivalent(before[k], after[k]);
    if (same && is_net(composed) && !out.has_cuts() && is_net(out) && check_switchings(out)) {
      ++ok;
    } else {
      ++failed;
      std::cerr << "cut elimination failed in round " << i << "\n" << render_dot(composed);
    }
  }
  if (machine) {
    std::cout << "pairs=" << trials << "\nfailures=" << failed << "\naxiom_steps=" << total.axiom
              << "\nmultiplicative_steps=" << total.multiplicative
              << "\nquantifier_steps=" << total.quantifier << "\n";
  } else {
    std::cout << ok << "/" << trials << " cut pairs reduced to cut-free nets ("
              << total.axiom << " axiom, " << total.multiplicative << " multiplicative, "
              << total.quantifier << " quantifier steps)\n";
  }
  return failed ? kProperty : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MILL1 proof nets and displacement grammars"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--machine", common.machine, "key=value output");

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--stats", common.stats, "print search statistics");
    sub->add_option("--limit", common.limit, "stop after N proofs (0 = all)");
    sub->add_option("--jobs", common.jobs, "worker threads for the first search branch")->check(CLI::PositiveNumber);
    sub->add_option("--dot", common.dot_dir, "write one DOT file per proof into this directory");
    sub->add_flag("--machine", common.machine, "key=value output");
  };

  std::string sequent_text, sequent_file;
  auto* prove_cmd = app.add_subcommand("prove", "search for proof nets of a sequent");
  prove_cmd->add_option("sequent", sequent_text, "sequent such as \"a, a -o b |- b\"");
  prove_cmd->add_option("--file", sequent_file, "read the sequent from a file");
  add_common(prove_cmd);

  auto* render_cmd = app.add_subcommand("render", "print the first proof net as DOT");
  render_cmd->add_option("sequent", sequent_text, "sequent");
  render_cmd->add_option("--file", sequent_file, "read the sequent from a file");

  std::string lexicon, goal = "s", word, formula;
  std::vector<std::string> words;
  int base = -1;
  bool allow_nonsimple = false, trace = false;
  auto* parse_cmd = app.add_subcommand("parse", "parse a sentence with a lexicon");
  parse_cmd->add_option("--lexicon", lexicon, "lexicon file")->required();
  parse_cmd->add_option("--goal", goal, "goal formula in D syntax (default s)");
  parse_cmd->add_option("--base", base, "position of the first word (overrides the lexicon)")
      ->check(CLI::IsMember({0, 1}));
  parse_cmd->add_flag("--allow-nonsimple", allow_nonsimple, "accept entries flagged by the lint");
  parse_cmd->add_flag("--trace", trace, "print the conjugate count of every selection");
  parse_cmd->add_option("words", words, "the sentence")->required();
  add_common(parse_cmd);

  std::vector<int> pos;
  bool drop = false, unicode = false, nonassoc = false;
  int scope = 0;
  auto* translate_cmd = app.add_subcommand("translate", "translate a lexical entry or D formula");
  translate_cmd->add_option("--lexicon", lexicon, "lexicon file");
  translate_cmd->add_option("word", word, "word to look up");
  translate_cmd->add_option("--formula", formula, "D formula instead of a word");
  translate_cmd->add_option("--pos", pos, "string positions")->expected(1, 16);
  translate_cmd->add_flag("--drop", drop, "drop quantifiers and arguments");
  translate_cmd->add_flag("--unicode", unicode, "print with logical symbols");
  translate_cmd->add_flag("--nonassoc", nonassoc, "successor encoding for non-associative formulas");
  translate_cmd->add_option("--scope", scope, "scope level i: s(p0,p1,s^i(X))")->check(CLI::PositiveNumber);

  int max_async = 4, trials = 10000, orders = 20;
  unsigned long long seed = 1;
  auto* oracle_cmd = app.add_subcommand("oracle", "compare contraction with the switching check");
  oracle_cmd->add_option("--max-async", max_async, "asynchronous links per structure")->check(CLI::Range(0, 6));
  oracle_cmd->add_option("--trials", trials, "number of structures")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--orders", orders, "random contraction orders per structure")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--seed", seed, "random seed");
  oracle_cmd->add_flag("--machine", common.machine, "key=value output");

  int cut_trials = 100;
  auto* cut_cmd = app.add_subcommand("cutelim", "eliminate cuts from random composed nets");
  cut_cmd->add_option("--trials", cut_trials, "number of cut pairs")->check(CLI::NonNegativeNumber);
  cut_cmd->add_option("--seed", seed, "random seed");
  cut_cmd->add_flag("--machine", common.machine, "key=value output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSyntax;
  }

  try {
    if (*prove_cmd || *render_cmd) {
      if (sequent_text.empty() && sequent_file.empty()) {
        std::cerr << "error: give a sequent or --file\n";
        return kSyntax;
      }
      return cmd_prove(sequent_text, sequent_file, common, render_cmd->parsed());
    }
    if (*parse_cmd)
      return cmd_parse(lexicon, words, goal, base, allow_nonsimple, trace, common);
    if (*translate_cmd)
      return cmd_translate(lexicon, word, formula, pos, drop, unicode, nonassoc, scope);
    if (*oracle_cmd) return cmd_oracle(max_async, trials, orders, seed, common.machine);
    if (*cut_cmd) return cmd_cutelim(cut_trials, seed, common.machine);
  } catch (const ParseError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kSyntax;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSyntax;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResources;
  } catch (const LexiconError& e) {
    std::cerr << "lexicon error: " << e.what() << "\n";
    return kLexicon;
  } catch (const SortError& e) {
    std::cerr << "lexicon error: " << e.what() << "\n";
    return kLexicon;
  } catch (const TranslateError& e) {
    std::cerr << "translation error: " << e.what() << "\n";
    return kLexicon;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kProperty;
  }
  return kOk;
}
