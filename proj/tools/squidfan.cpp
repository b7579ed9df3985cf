#include "squidfan/cli.hpp"

#include <string>
#include <vector>

int main(int argc, char** argv)
{
    return squidfan::cli::run(std::vector< std::string >(argv, argv + argc));
}
