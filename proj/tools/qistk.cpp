#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto r = qistk::cli::run(args);
    std::cout << (r.json.empty() ? r.text : r.json);
    std::cerr << r.error;
    return r.code;
}
