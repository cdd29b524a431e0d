#pragma once

// Loading .lct files and their `#@` expectations.
//
// Recognised metadata keys:
//   mode       typed (default) or untyped
//   type       expected type
//   normal     expected normal form, compared modulo alpha and annotations
//   steps      expected number of head steps
//   witnesses  comma-separated expected Herbrand witnesses
//   stuck      yes when the normal form is expected to keep an abort

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlc/parser.hpp"
#include "dlc/printer.hpp"
#include "dlc/subst.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

struct Prepared {
  Document doc;
  Flavor flavor = Flavor::LC;
  bool typed = true;
  Term term;     // elaborated when typed
  Formula type;  // null when untyped
};

/// Parses and, unless the document is marked untyped (or `untyped` is
/// set), elaborates it against its goal. Throws SyntaxError / TypeError.
inline Prepared prepare(std::string_view src, const Signature& sig = Signature::default_signature(),
                        std::optional<Flavor> flavor = std::nullopt, bool untyped = false) {
  Prepared p;
  p.doc = parse_document(src, sig);
  p.flavor = flavor ? *flavor : document_flavor(p.doc);
  auto mode = p.doc.meta.find("mode");
  p.typed = !untyped && !(mode != p.doc.meta.end() && mode->second == "untyped");
  p.term = p.doc.term;
  if (p.typed) {
    Typed t = elaborate(p.doc.context, p.doc.term, p.doc.goal, p.flavor);
    p.term = t.term;
    p.type = t.type;
  }
  return p;
}

struct CorpusEntry {
  std::string name;  // path relative to the corpus root, without extension
  std::string path;
  std::string source;
  Prepared prepared;

  const Document& doc() const { return prepared.doc; }
  const Context& context() const { return prepared.doc.context; }
  bool typed() const { return prepared.typed; }
  Flavor flavor() const { return prepared.flavor; }
  const Term& term() const { return prepared.term; }

  std::optional<std::string> meta(const std::string& key) const {
    auto it = prepared.doc.meta.find(key);
    if (it == prepared.doc.meta.end()) return std::nullopt;
    return it->second;
  }
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

/// Every *.lct below `root`, sorted by name.
inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& root,
                                            const Signature& sig = Signature::default_signature()) {
  namespace fs = std::filesystem;
  std::vector<CorpusEntry> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().extension() != ".lct") continue;
    CorpusEntry c;
    c.path = e.path().string();
    fs::path rel = fs::relative(e.path(), root);
    rel.replace_extension();
    c.name = rel.generic_string();
    c.source = read_file(c.path);
    try {
      c.prepared = prepare(c.source, sig);
    } catch (const std::exception& ex) {
      throw std::runtime_error(c.name + ": " + ex.what());
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

/// Equality used for `#@ normal:` expectations.
inline bool same_up_to_annotations(const Term& a, const Term& b) {
  return alpha_equal(erase_annotations(a), erase_annotations(b));
}

}  // namespace dlc
