#include "simtebd/cli.hpp"

int main(int argc, char** argv) {
    return simtebd::cli::main(argc, argv);
}
