#pragma once

#include "spikelink/rng.hpp"
#include "spikelink/snn/spike.hpp"
#include "spikelink/snn/mlif.hpp"
#include "spikelink/snn/network.hpp"
#include "spikelink/snn/checkpoint.hpp"
#include "spikelink/snn/surrogate.hpp"
#include "spikelink/snn/train.hpp"
#include "spikelink/phy/ofdm.hpp"
#include "spikelink/phy/channel.hpp"
#include "spikelink/phy/estimation.hpp"
#include "spikelink/phy/power.hpp"
#include "spikelink/modem/qpsk.hpp"
#include "spikelink/modem/ldpc.hpp"
#include "spikelink/modem/aer.hpp"
#include "spikelink/modem/digital.hpp"
#include "spikelink/modem/analog.hpp"
#include "spikelink/sim/dataset.hpp"
#include "spikelink/sim/energy.hpp"
#include "spikelink/sim/pipeline.hpp"
#include "spikelink/sim/config.hpp"
#include "spikelink/sim/sweep.hpp"
