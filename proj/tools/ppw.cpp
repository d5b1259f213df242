#include "ppw/cli.hpp"

int main(int argc, char** argv)
{
    return ppw::dispatch(argc, argv);
}
