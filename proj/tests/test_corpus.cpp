#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "topicatlas/corpus.hpp"
#include "topicatlas/error.hpp"
#include "topicatlas/generate.hpp"

using namespace topicatlas;

namespace {

Corpus ingest_string(const std::string& text, std::size_t min_count = 1, IngestStats* stats = nullptr) {
  std::istringstream in(text);
  IngestOptions opts;
  opts.min_count = min_count;
  return ingest_corpus(in, opts, stats);
}

}  // namespace

TEST_CASE("ingest: three records with links") {
  const std::string src =
      R"({"id": "a", "text": "graph topic model", "links": ["b", "c"]})"
      "\n"
      R"({"id": "b", "text": ["topic", "web"], "links": []})"
      "\n\n"
      R"({"id": "c", "text": "citation graph", "links": []})"
      "\n";
  const Corpus c = ingest_string(src);
  CHECK(c.num_docs() == 3);
  CHECK(c.doc(0).link_tokens == std::vector<DocIndex>{1, 2});
  CHECK(c.doc(1).link_tokens.empty());
  CHECK(c.vocabulary().terms() == std::vector<std::string>{"citation", "graph", "model", "topic", "web"});
  CHECK(c.doc(0).snippet == "graph topic model");
  CHECK(c.doc(1).snippet == "topic web");
}

TEST_CASE("ingest: unknown and self links are dropped, duplicates kept") {
  const std::string src =
      R"({"id": "a", "text": "x y", "links": ["b", "zzz", "b", "a"]})"
      "\n"
      R"({"id": "b", "text": "x", "links": []})"
      "\n";
  IngestStats stats;
  const Corpus c = ingest_string(src, 1, &stats);
  CHECK(stats.dropped_unknown_links == 1);
  CHECK(stats.dropped_self_links == 1);
  CHECK(c.doc(0).link_tokens == std::vector<DocIndex>{1, 1});
}

TEST_CASE("ingest: errors") {
  SUBCASE("malformed record names its line") {
    const std::string src = R"({"id": "a", "text": "x", "links": []})"
                            "\n"
                            R"({"id": "b", "text": "x", "links": )"
                            "\n";
    try {
      ingest_string(src);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("missing field") { CHECK_THROWS_AS(ingest_string(R"({"id": "a", "text": "x"})"), ParseError); }
  SUBCASE("links must be strings") {
    CHECK_THROWS_AS(ingest_string(R"({"id": "a", "text": "x", "links": [3]})"), ParseError);
  }
  SUBCASE("duplicate id") {
    const std::string src = R"({"id": "a", "text": "x", "links": []})"
                            "\n"
                            R"({"id": "a", "text": "y", "links": []})";
    CHECK_THROWS_AS(ingest_string(src), ValidationError);
  }
}

TEST_CASE("tokenizer lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("Topic-Models, 2nd ed.") == std::vector<std::string>{"topic", "models", "2nd", "ed"});
  CHECK(tokenize("  ").empty());
}

TEST_CASE("build_vocabulary") {
  SUBCASE("min_count filters") {
    const Vocabulary v = build_vocabulary({{"cat", "cat", "dog"}}, 2, {});
    CHECK(v.terms() == std::vector<std::string>{"cat"});
  }
  SUBCASE("stopwords") {
    const Vocabulary v = build_vocabulary({{"cat", "cat", "dog"}}, 1, {"dog"});
    CHECK(v.terms() == std::vector<std::string>{"cat"});
  }
  SUBCASE("size equals distinct-term count") {
    const std::vector<std::vector<std::string>> docs{{"b", "a", "c", "a"}, {"d", "b"}, {"e", "a", "f", "f"}};
    std::set<std::string> distinct;
    for (const auto& d : docs) distinct.insert(d.begin(), d.end());
    const Vocabulary v = build_vocabulary(docs, 1, {});
    CHECK(v.size() == distinct.size());
    CHECK(std::is_sorted(v.terms().begin(), v.terms().end()));
  }
  SUBCASE("empty result and bad min_count are errors") {
    CHECK_THROWS_AS(build_vocabulary({{"cat"}}, 2, {}), ValidationError);
    CHECK_THROWS_AS(build_vocabulary({{"cat"}}, 0, {}), ValidationError);
  }
}

TEST_CASE("ingest at citation-network scale keeps every in-corpus link") {
  constexpr std::size_t kDocs = 20989;
  constexpr std::size_t kLinks = 125934;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, kDocs - 1);
  std::vector<std::vector<std::size_t>> links(kDocs);
  for (std::size_t l = 0; l < kLinks; ++l) {
    const std::size_t src = l % kDocs;
    std::size_t dst = pick(rng);
    if (dst == src) dst = (dst + 1) % kDocs;
    links[src].push_back(dst);
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < kDocs; ++i) {
    os << R"({"id":"P)" << i << R"(","text":"alpha beta","links":[)";
    for (std::size_t j = 0; j < links[i].size(); ++j) os << (j ? "," : "") << "\"P" << links[i][j] << '"';
    os << "]}\n";
  }
  const Corpus c = ingest_string(os.str());
  CHECK(c.num_docs() == kDocs);
  CHECK(c.total_link_tokens() == kLinks);
}

TEST_CASE("filter_by_link_count") {
  std::vector<Document> docs(3);
  docs[0] = {"a", {0}, {}, ""};
  docs[1] = {"b", {0}, {0, 2, 2}, ""};
  docs[2] = {"c", {0}, {0, 1, 1, 0, 1}, ""};
  const Corpus c(docs, Vocabulary({"x"}));

  SUBCASE("min_links=0 is the identity") { CHECK(filter_by_link_count(c, 0) == c); }

  SUBCASE("documents linking only into kept documents survive") {
    std::vector<Document> d2(3);
    d2[0] = {"a", {0}, {}, ""};
    d2[1] = {"b", {0}, {2, 2, 2}, ""};
    d2[2] = {"c", {0}, {1, 1, 1, 1, 1}, ""};
    const Corpus f = filter_by_link_count(Corpus(d2, Vocabulary({"x"})), 3);
    CHECK(f.num_docs() == 2);
    CHECK(f.doc(0).id == "b");
    CHECK(f.doc(0).link_tokens == std::vector<DocIndex>{1, 1, 1});
  }

  SUBCASE("links into removed documents are dropped and the filter reaches a fixed point") {
    // Removing "a" leaves "b" with 2 links, which removes "b" and leaves "c" with 0.
    CHECK_THROWS_AS(filter_by_link_count(c, 3), ValidationError);
  }

  SUBCASE("idempotent on random networks, matches a brute-force survivor check") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 30;
      std::uniform_int_distribution<std::size_t> pick(0, n - 1), count(0, 6);
      std::vector<Document> rd(n);
      for (std::size_t i = 0; i < n; ++i) {
        rd[i].id = "r" + std::to_string(i);
        rd[i].word_tokens = {0};
        const std::size_t k = count(rng);
        for (std::size_t j = 0; j < k; ++j) rd[i].link_tokens.push_back(static_cast<DocIndex>(pick(rng)));
      }
      const Corpus rc(rd, Vocabulary({"x"}));
      Corpus once;
      try {
        once = filter_by_link_count(rc, 3);
      } catch (const ValidationError&) {
        continue;
      }
      CHECK(filter_by_link_count(once, 3) == once);
      for (const auto& d : once.documents()) CHECK(d.link_tokens.size() >= 3);
    }
  }
}

TEST_CASE("split_folds") {
  auto corpus_of = [](std::size_t n) {
    std::vector<Document> docs(n);
    for (std::size_t i = 0; i < n; ++i) docs[i] = {"d" + std::to_string(i), {0}, {}, ""};
    return Corpus(docs, Vocabulary({"x"}));
  };

  SUBCASE("D=10, 5 folds of exactly 2") {
    const auto fa = split_folds(corpus_of(10), 5, 3);
    for (std::size_t f = 0; f < 5; ++f) CHECK(fa.members(f).size() == 2);
  }
  SUBCASE("D=11 gives sizes {3,2,2,2,2}") {
    const auto fa = split_folds(corpus_of(11), 5, 9);
    std::vector<std::size_t> sizes;
    for (std::size_t f = 0; f < 5; ++f) sizes.push_back(fa.members(f).size());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{2, 2, 2, 2, 3});
  }
  SUBCASE("deterministic per seed; partitions the documents") {
    const Corpus c = corpus_of(37);
    const auto a = split_folds(c, 5, 42);
    const auto b = split_folds(c, 5, 42);
    CHECK(a.assignment == b.assignment);
    std::vector<int> seen(37, 0);
    for (std::size_t f = 0; f < 5; ++f)
      for (DocIndex i : a.members(f)) ++seen[i];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    for (std::size_t f = 0; f < 5; ++f) CHECK(a.members(f).size() + a.complement(f).size() == 37);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(split_folds(corpus_of(3), 5, 0), ValidationError);
    CHECK_THROWS_AS(split_folds(corpus_of(3), 1, 0), ValidationError);
  }
}

TEST_CASE("corpus dump round-trips") {
  const ModelParams p = random_params(2, 2, 12, 9, 0.5, 0.5, 3);
  const std::vector<std::size_t> lengths(9, 7), links(9, 3);
  const Corpus c = generate_corpus(p, lengths, links, 8);
  std::stringstream ss;
  write_corpus(ss, c);
  const Corpus back = read_corpus(ss);
  CHECK(back == c);
  CHECK(serialize_corpus(back) == serialize_corpus(c));
  CHECK(corpus_hash(back) == corpus_hash(c));

  std::istringstream bad("#not-a-corpus\n");
  CHECK_THROWS_AS(read_corpus(bad), ParseError);
}

TEST_CASE("ingest -> dump -> ingest is stable") {
  const std::string src =
      R"({"id": "x1", "text": "alpha beta beta", "links": ["x2"]})"
      "\n"
      R"({"id": "x2", "text": "beta gamma", "links": ["x1", "x1"]})"
      "\n";
  const Corpus c = ingest_string(src);
  std::stringstream ss;
  write_corpus(ss, c);
  const Corpus back = read_corpus(ss);
  CHECK(back == c);
}
