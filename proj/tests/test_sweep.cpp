#include <catch2/catch_amalgamated.hpp>
#include "spikelink/spikelink.hpp"
