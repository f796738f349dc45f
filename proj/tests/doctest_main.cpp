#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "rslab/real.hpp"

int main(int argc, char** argv) {
    rslab::set_working_digits(40);
    return doctest::Context(argc, argv).run();
}
