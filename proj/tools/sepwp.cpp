#include "sepwp/cli.hpp"

int main(int argc, char** argv)
{
    return sepwp::cli::main(argc, argv);
}
