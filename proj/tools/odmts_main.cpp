#include "odmts/cli.hpp"

int main(int argc, char** argv) {
    return odmts::cli_main(argc, argv);
}
