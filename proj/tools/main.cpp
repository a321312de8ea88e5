#include "commands.hpp"

int main(int argc, char** argv) { return topicatlas::cli::run(argc, argv); }
