#include <iostream>

#include "chatelet/cli.hpp"

int main(int argc, char** argv) { return chatelet::cli::run(argc, argv, std::cout, std::cerr); }
