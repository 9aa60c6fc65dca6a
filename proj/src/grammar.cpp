#include "mill1/grammar.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mill1/errors.hpp"
#include "mill1/translate.hpp"

namespace mill1 {

const std::vector<LexEntry>* Lexicon::lookup(const std::string& word) const {
  auto it = entries.find(word);
  if (it != entries.end()) return &it->second;
  std::string lower;
  for (char c : word) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& [w, e] : entries) {
    std::string wl;
    for (char c : w) wl += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (wl == lower) return &e;
  }
  return nullptr;
}

int Lexicon::features_of(const std::string& atom) const {
  auto it = feature_arity.find(atom);
  return it == feature_arity.end() ? 0 : it->second;
}

namespace {

using K = DFormula::Kind;

void walk_d(const DFormula& f, const std::function<void(const DFormula&)>& fn) {
  fn(f);
  if (f.is_binary()) {
    walk_d(f.left(), fn);
    walk_d(f.right(), fn);
  } else if (f.is_unary()) {
    walk_d(f.arg(), fn);
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void rethrow_at(const ParseError& e, int line, int column_offset) {
  std::string msg = e.what();
  // Drop the "line:col: " prefix of the inner parser.
  const std::size_t cut = msg.find(": ");
  if (cut != std::string::npos) msg = msg.substr(cut + 2);
  throw ParseError(msg, line, e.column() + column_offset);
}

int parse_int(const std::string& s, int line, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(std::string("expected an integer for ") + what, line, 1);
}

void check_features(const Lexicon& lex, const DFormula& f, int line) {
  walk_d(f, [&](const DFormula& g) {
    if (!g.is_atom()) return;
    const int want = lex.features_of(g.name());
    const int got = static_cast<int>(g.features().size());
    if (want != got)
      throw LexiconError("line " + std::to_string(line) + ": atom " + g.name() + " takes " +
                         std::to_string(want) + " feature(s), found " + std::to_string(got));
  });
}

DFormula fill_features(const Lexicon& lex, const DFormula& f) {
  if (f.is_atom()) {
    const int want = lex.features_of(f.name());
    if (!f.features().empty() || want == 0) return f;
    std::vector<Term> feats;
    for (int i = 0; i < want; ++i) feats.push_back(fresh_var("F"));
    return DFormula::atom(f.name(), std::move(feats));
  }
  if (f.is_binary())
    return DFormula::binary(f.kind(), fill_features(lex, f.left()), fill_features(lex, f.right()));
  if (f.is_unary()) return DFormula::unary(f.kind(), fill_features(lex, f.arg()));
  return f;
}

}  // namespace

std::vector<std::string> simplicity_lint(const DFormula& f) {
  std::vector<std::string> out;
  std::function<void(const DFormula&)> walk = [&](const DFormula& g) {
    switch (g.kind()) {
      case K::Check: out.push_back("check is outside the simple fragment"); break;
      case K::RInj: out.push_back("rinj is outside the simple fragment"); break;
      case K::LInj: out.push_back("linj is outside the simple fragment"); break;
      case K::UnitI:
      case K::UnitJ: out.push_back("unit outside a synthetic connective"); break;
      default: break;
    }
    // Units are fine as the wrapped argument of A o> I, or as the J of
    // J\A and A/J.
    if (g.kind() == K::OdotGt && g.right().kind() == K::UnitI) {
      walk(g.left());
      return;
    }
    if (g.kind() == K::Under && g.left().kind() == K::UnitJ) {
      walk(g.right());
      return;
    }
    if (g.kind() == K::Over && g.right().kind() == K::UnitJ) {
      walk(g.left());
      return;
    }
    if (g.is_binary()) {
      walk(g.left());
      walk(g.right());
    } else if (g.is_unary()) {
      walk(g.arg());
    }
  };
  walk(f);
  return out;
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  struct Pending {
    std::string word;
    LexEntry entry;
    std::size_t column;
  };
  std::vector<Pending> pending;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const std::size_t dcolon = body.find("::");
    const std::size_t schema = body.find(":-");
    if (dcolon == std::string::npos && schema == std::string::npos) {
      std::istringstream words(body);
      std::string key, a, b, extra;
      words >> key >> a >> b >> extra;
      if (key == "base" && !a.empty() && b.empty()) {
        lex.base = parse_int(a, line, "base");
        if (lex.base != 0 && lex.base != 1) throw ParseError("base must be 0 or 1", line, 1);
      } else if (key == "sort" && !b.empty() && extra.empty()) {
        const int n = parse_int(b, line, "sort");
        if (n < 0) throw ParseError("sort must be non-negative", line, 1);
        lex.sorts.set(a, n);
      } else if (key == "features" && !b.empty() && extra.empty()) {
        const int n = parse_int(b, line, "features");
        if (n < 0) throw ParseError("feature count must be non-negative", line, 1);
        lex.feature_arity[a] = n;
      } else {
        throw ParseError("expected a declaration or an entry", line, 1);
      }
      continue;
    }
    const bool is_d = dcolon != std::string::npos && (schema == std::string::npos || dcolon < schema);
    const std::size_t sep = is_d ? dcolon : schema;
    const std::string word = trim(body.substr(0, sep));
    if (word.empty() || word.find_first_of(" \t") != std::string::npos)
      throw ParseError("expected a single word before " + std::string(is_d ? "::" : ":-"), line, 1);
    const std::string rhs = body.substr(sep + 2);
    const std::size_t column = raw.find(body) + sep + 2;
    Pending p{word, LexEntry{}, column};
    p.entry.text = trim(rhs);
    p.entry.line = line;
    p.entry.kind = is_d ? LexEntry::Kind::D : LexEntry::Kind::Schema;
    std::string free_var;
    try {
      if (is_d) {
        p.entry.d = parse_d(rhs);
      } else {
        std::map<std::string, Term> env;
        p.entry.left = fresh_var("L");
        p.entry.right = fresh_var("R");
        env.emplace("L", p.entry.left);
        env.emplace("R", p.entry.right);
        p.entry.schema = parse_mill(rhs, &env);
        for (const auto& [name, t] : env)
          if (name != "L" && name != "R") free_var = name;
      }
    } catch (const ParseError& e) {
      rethrow_at(e, line, static_cast<int>(column));
    }
    if (!free_var.empty())
      throw ParseError("free variable " + free_var + " in schema", line, static_cast<int>(column) + 1);
    pending.push_back(std::move(p));
  }
  // Declarations may follow entries, so checks run once the file is read.
  for (Pending& p : pending) {
    if (p.entry.kind == LexEntry::Kind::D) {
      try {
        const int s = sort(p.entry.d, lex.sorts);
        if (s != 0)
          throw LexiconError("line " + std::to_string(p.entry.line) + ": entry for " + p.word +
                             " has sort " + std::to_string(s) + ", words need sort 0");
      } catch (const SortError& e) {
        throw LexiconError("line " + std::to_string(p.entry.line) + ": " + e.what());
      }
      check_features(lex, p.entry.d, p.entry.line);
      p.entry.warnings = simplicity_lint(p.entry.d);
      for (const auto& w : p.entry.warnings)
        lex.warnings.push_back("line " + std::to_string(p.entry.line) + ": " + p.word + ": " + w);
    }
    lex.entries[p.word].push_back(std::move(p.entry));
  }
  for (const auto& [word, list] : lex.entries)
    if (list.size() > 1)
      lex.warnings.push_back(word + " is ambiguous (" + std::to_string(list.size()) + " entries)");
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lexicon " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str());
}

Sentence make_sentence(std::string_view text, int base) {
  Sentence s;
  s.base = base;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) s.words.push_back(w);
  return s;
}

MillFormula lexical_formula(const Lexicon& lex, const LexEntry& e, int l, int r) {
  const Term tl = Term::integer(l), tr = Term::integer(r);
  if (e.kind == LexEntry::Kind::D) return universal_closure(translate_d(e.d, {tl, tr}, lex.sorts));
  Substitution s;
  s.bind(e.left.var_id(), tl);
  s.bind(e.right.var_id(), tr);
  return universal_closure(substitute(e.schema, s));
}

MillFormula goal_formula(const Lexicon& lex, std::string_view goal, int first, int last) {
  DFormula d = fill_features(lex, parse_d(goal));
  walk_d(d, [&](const DFormula& g) {
    if (g.is_atom() && static_cast<int>(g.features().size()) != lex.features_of(g.name()))
      throw LexiconError("goal atom " + g.name() + " takes " +
                         std::to_string(lex.features_of(g.name())) + " feature(s)");
  });
  return translate_d(d, {Term::integer(first), Term::integer(last)}, lex.sorts);
}

SequentEnumerator::SequentEnumerator(const Lexicon& lex, Sentence s, std::string goal)
    : lex_(lex), sentence_(std::move(s)), goal_(std::move(goal)) {
  for (const std::string& w : sentence_.words) {
    const auto* e = lex_.lookup(w);
    if (!e || e->empty()) throw LexiconError("unknown word: " + w);
    entries_.push_back(e);
  }
  odometer_.assign(sentence_.words.size(), 0);
}

std::size_t SequentEnumerator::combinations() const {
  std::size_t n = 1;
  for (const auto* e : entries_) n *= e->size();
  return n;
}

std::optional<LexicalSequent> SequentEnumerator::next() {
  if (done_) return std::nullopt;
  LexicalSequent out;
  out.choice = odometer_;
  std::set<std::string> used;
  for (std::size_t i = 0; i < sentence_.words.size(); ++i) {
    const LexEntry& e = (*entries_[i])[static_cast<std::size_t>(odometer_[i])];
    const int l = sentence_.first() + static_cast<int>(i);
    out.sequent.antecedent.push_back(lexical_formula(lex_, e, l, l + 1));
    std::string name = sentence_.words[i] + "_" + std::to_string(odometer_[i]);
    if (!used.insert(name).second) name += "_" + std::to_string(l);
    used.insert(name);
    out.names.push_back(name);
  }
  out.sequent.succedent = goal_formula(lex_, goal_, sentence_.first(), sentence_.last());
  // Advance the odometer, last word fastest.
  done_ = true;
  for (std::size_t i = odometer_.size(); i-- > 0;) {
    if (++odometer_[i] < static_cast<int>(entries_[i]->size())) {
      done_ = false;
      break;
    }
    odometer_[i] = 0;
  }
  return out;
}

ParseResult parse(const Lexicon& lex, const Sentence& s, const std::string& goal,
                  const ParseOptions& opts) {
  SequentEnumerator en(lex, s, goal);
  if (!opts.allow_nonsimple) {
    for (const std::string& w : s.words)
      for (const LexEntry& e : *lex.lookup(w))
        if (!e.simple())
          throw LexiconError("entry for " + w + " (line " + std::to_string(e.line) +
                             ") is not simple: " + e.warnings.front() +
                             "; use --allow-nonsimple");
  }
  ParseResult out;
  while (auto ls = en.next()) {
    ++out.sequents;
    ProveOptions po = opts.prove;
    if (opts.limit) po.limit = opts.limit - out.readings.size();
    ProveResult r = prove(ls->sequent.antecedent, ls->sequent.succedent, po);
    out.stats.expansions += r.stats.expansions;
    out.stats.proofs += r.stats.proofs;
    out.stats.seconds += r.stats.seconds;
    for (const auto& [k, n] : r.stats.prunes) out.stats.prunes[k] += n;
    out.stats.selections.insert(out.stats.selections.end(), r.stats.selections.begin(),
                                r.stats.selections.end());
    for (ProofStructure& p : r.proofs) {
      Reading rd;
      rd.lexical = *ls;
      rd.net = std::move(p);
      if (opts.extract_terms) {
        try {
          rd.term = lambda_term(sequentialize(rd.net), ls->names);
          std::map<std::string, MillFormula> types;
          for (std::size_t i = 0; i < ls->names.size(); ++i)
            types[ls->names[i]] = drop_quantifiers(ls->sequent.antecedent[i]);
          rd.term_type = linear_type(*rd.term, types, &rd.term_error);
        } catch (const std::logic_error& e) {
          rd.term_error = e.what();
        }
      }
      out.readings.push_back(std::move(rd));
    }
    if (opts.limit && out.readings.size() >= opts.limit) break;
  }
  return out;
}

}  // namespace mill1
