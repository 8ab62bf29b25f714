#include "app.hpp"

int main(int argc, char** argv) { return qrem::cli::run(argc, argv); }
