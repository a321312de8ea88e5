#pragma once

#include <string>

#include "topicatlas/topicweb.hpp"

namespace topicatlas {

/// Canonical graph JSON: sorted keys, reals rounded to 10 significant digits, trailing newline.
std::string export_graph(const TopicWeb& web);
TopicWeb parse_graph(const std::string& text);

void write_graph_file(const std::string& path, const TopicWeb& web);

/// Structural checks on a parsed graph document; returns an empty string when valid.
std::string validate_graph_json(const std::string& text);

double round_significant(double value, int digits = 10);

const char* to_string(NodeKind kind);
const char* to_string(EdgeKind kind);

}  // namespace topicatlas
