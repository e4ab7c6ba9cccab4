#include <iostream>

#include "sketch3d_app/commands.hpp"

int main(int argc, char** argv) { return sketch3d::app::run_cli(argc, argv, std::cout, std::cerr); }
