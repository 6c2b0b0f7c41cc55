#include "synopsis/cli.hpp"

int main(int argc, char** argv) {
    return synopsis::run(argc, argv);
}
