#include "topicatlas/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "topicatlas/error.hpp"
#include "topicatlas/hash.hpp"

namespace topicatlas {

using nlohmann::json;

namespace {

constexpr std::size_t kSnippetChars = 200;

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

struct RawRecord {
  std::string id;
  std::vector<std::string> terms;
  std::vector<std::string> links;
  std::string snippet;
};

RawRecord parse_record(const std::string& line, std::size_t line_no, const IngestOptions& options) {
  auto fail = [&](const std::string& what) {
    return ParseError("line " + std::to_string(line_no) + ": " + what);
  };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw fail(std::string("invalid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) throw fail("record is not an object");
  RawRecord rec;
  if (!j.contains("id") || !j["id"].is_string()) throw fail("missing string field 'id'");
  rec.id = j["id"].get<std::string>();

  if (!j.contains("text")) throw fail("missing field 'text'");
  const json& text = j["text"];
  if (text.is_string()) {
    const auto& s = text.get_ref<const std::string&>();
    rec.terms = options.tokenize_raw ? tokenize(s) : split_whitespace(s);
    rec.snippet = s.substr(0, kSnippetChars);
  } else if (text.is_array()) {
    std::string joined;
    for (const auto& t : text) {
      if (!t.is_string()) throw fail("'text' array must hold strings");
      rec.terms.push_back(t.get<std::string>());
      if (!joined.empty()) joined += ' ';
      joined += rec.terms.back();
    }
    rec.snippet = joined.substr(0, kSnippetChars);
  } else {
    throw fail("'text' must be a string or an array of strings");
  }

  if (j.contains("links")) {
    const json& links = j["links"];
    if (!links.is_array()) throw fail("'links' must be an array");
    for (const auto& l : links) {
      if (!l.is_string()) throw fail("'links' entries must be strings");
      rec.links.push_back(l.get<std::string>());
    }
  } else {
    throw fail("missing field 'links'");
  }
  return rec;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<TermId>(i)).second)
      throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Corpus::Corpus(std::vector<Document> documents, Vocabulary vocabulary)
    : documents_(std::move(documents)), vocabulary_(std::move(vocabulary)) {
  id_index_.reserve(documents_.size());
  const std::size_t v = vocabulary_.size();
  const std::size_t d = documents_.size();
  for (std::size_t i = 0; i < d; ++i) {
    const Document& doc = documents_[i];
    if (!id_index_.emplace(doc.id, static_cast<DocIndex>(i)).second)
      throw ValidationError("duplicate document id '" + doc.id + "'");
    for (TermId w : doc.word_tokens)
      if (w >= v) throw ValidationError("document '" + doc.id + "' has word index out of range");
    for (DocIndex l : doc.link_tokens)
      if (l >= d) throw ValidationError("document '" + doc.id + "' has link index out of range");
  }
}

std::optional<DocIndex> Corpus::find(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::total_word_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents_) n += d.word_tokens.size();
  return n;
}

std::size_t Corpus::total_link_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents_) n += d.link_tokens.size();
  return n;
}

Corpus Corpus::without_links() const {
  std::vector<Document> docs = documents_;
  for (auto& d : docs) d.link_tokens.clear();
  return Corpus(std::move(docs), vocabulary_);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs, std::size_t min_count,
                            const std::unordered_set<std::string>& stopwords) {
  if (min_count < 1) throw ValidationError("min_count must be >= 1");
  std::map<std::string, std::size_t> counts;  // ordered: gives the lexicographic vocabulary directly
  for (const auto& doc : docs)
    for (const auto& t : doc) ++counts[t];
  std::vector<std::string> terms;
  for (const auto& [term, n] : counts)
    if (n >= min_count && !stopwords.contains(term)) terms.push_back(term);
  if (terms.empty()) throw ValidationError("vocabulary is empty after frequency and stopword filtering");
  return Vocabulary(std::move(terms));
}

Corpus ingest_corpus(std::istream& in, const IngestOptions& options, IngestStats* stats) {
  IngestStats local;
  std::vector<RawRecord> records;
  std::unordered_map<std::string, DocIndex> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    RawRecord rec = parse_record(line, line_no, options);
    if (!ids.emplace(rec.id, static_cast<DocIndex>(records.size())).second)
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate document id '" + rec.id + "'");
    records.push_back(std::move(rec));
  }
  local.records = records.size();

  std::vector<std::vector<std::string>> term_lists;
  term_lists.reserve(records.size());
  for (const auto& r : records) term_lists.push_back(r.terms);
  Vocabulary vocab = build_vocabulary(term_lists, options.min_count, options.stopwords);
  term_lists.clear();

  std::vector<Document> docs;
  docs.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    RawRecord& r = records[i];
    Document doc;
    doc.id = std::move(r.id);
    doc.snippet = std::move(r.snippet);
    doc.word_tokens.reserve(r.terms.size());
    for (const auto& t : r.terms) {
      if (auto w = vocab.find(t))
        doc.word_tokens.push_back(*w);
      else
        ++local.dropped_oov_tokens;
    }
    for (const auto& target : r.links) {
      auto it = ids.find(target);
      if (it == ids.end()) {
        ++local.dropped_unknown_links;
      } else if (it->second == i) {
        ++local.dropped_self_links;
      } else {
        doc.link_tokens.push_back(it->second);
      }
    }
    docs.push_back(std::move(doc));
  }
  if (stats) *stats = local;
  return Corpus(std::move(docs), std::move(vocab));
}

Corpus filter_by_link_count(const Corpus& corpus, std::size_t min_links) {
  const std::size_t d = corpus.num_docs();
  std::vector<char> keep(d, 1);
  // Removing a document can push documents citing it below the threshold; iterate to a fixed point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (!keep[i]) continue;
      std::size_t live = 0;
      for (DocIndex l : corpus.doc(i).link_tokens) live += keep[l] ? 1 : 0;
      if (live < min_links) {
        keep[i] = 0;
        changed = true;
      }
    }
  }
  std::vector<DocIndex> remap(d, 0);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < d; ++i)
    if (keep[i]) remap[i] = static_cast<DocIndex>(kept++);
  if (kept == 0) throw ValidationError("link-count filter removed every document");

  std::vector<Document> docs;
  docs.reserve(kept);
  for (std::size_t i = 0; i < d; ++i) {
    if (!keep[i]) continue;
    Document doc = corpus.doc(i);
    doc.link_tokens.clear();
    for (DocIndex l : corpus.doc(i).link_tokens)
      if (keep[l]) doc.link_tokens.push_back(remap[l]);
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), corpus.vocabulary());
}

std::vector<DocIndex> FoldAssignment::members(std::size_t fold) const {
  std::vector<DocIndex> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(static_cast<DocIndex>(i));
  return out;
}

std::vector<DocIndex> FoldAssignment::complement(std::size_t fold) const {
  std::vector<DocIndex> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(static_cast<DocIndex>(i));
  return out;
}

FoldAssignment split_folds(const Corpus& corpus, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ValidationError("n_folds must be >= 2");
  const std::size_t d = corpus.num_docs();
  if (n_folds > d) throw ValidationError("n_folds exceeds the number of documents");
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  FoldAssignment fa;
  fa.n_folds = n_folds;
  fa.seed = seed;
  fa.assignment.assign(d, 0);
  for (std::size_t pos = 0; pos < d; ++pos) fa.assignment[perm[pos]] = pos % n_folds;
  return fa;
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << kCorpusMagic << '\n';
  json vocab = corpus.vocabulary().terms();
  out << json{{"vocabulary", vocab}, {"documents", corpus.num_docs()}}.dump() << '\n';
  for (const auto& d : corpus.documents()) {
    json j{{"id", d.id}, {"snippet", d.snippet}, {"words", d.word_tokens}, {"links", d.link_tokens}};
    out << j.dump() << '\n';
  }
}

Corpus read_corpus(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCorpusMagic) throw ParseError("corpus dump: bad magic header");
  if (!std::getline(in, line)) throw ParseError("corpus dump: missing header record");
  std::size_t n_docs = 0;
  std::vector<std::string> terms;
  try {
    json h = json::parse(line);
    terms = h.at("vocabulary").get<std::vector<std::string>>();
    n_docs = h.at("documents").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("corpus dump line 2: ") + e.what());
  }
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t i = 0; i < n_docs; ++i) {
    if (!std::getline(in, line)) throw ParseError("corpus dump: truncated document list");
    try {
      json j = json::parse(line);
      Document d;
      d.id = j.at("id").get<std::string>();
      d.snippet = j.at("snippet").get<std::string>();
      d.word_tokens = j.at("words").get<std::vector<TermId>>();
      d.link_tokens = j.at("links").get<std::vector<DocIndex>>();
      docs.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw ParseError("corpus dump line " + std::to_string(i + 3) + ": " + e.what());
    }
  }
  return Corpus(std::move(docs), Vocabulary(std::move(terms)));
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream os;
  write_corpus(os, corpus);
  return os.str();
}

std::uint64_t corpus_hash(const Corpus& corpus) { return fnv1a64(serialize_corpus(corpus)); }

Corpus load_corpus_file(const std::string& path, const IngestOptions& options, IngestStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  std::string first;
  std::getline(in, first);
  in.clear();
  in.seekg(0);
  if (first == kCorpusMagic) return read_corpus(in);
  return ingest_corpus(in, options, stats);
}

}  // namespace topicatlas
