#include "osagent/cli.hpp"

int main(int argc, char** argv) {
    return osagent::run_cli(argc, argv);
}
