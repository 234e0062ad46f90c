#pragma once

#include "reachmlp/activation.hpp"
#include "reachmlp/lattice.hpp"
#include "reachmlp/network.hpp"
#include "reachmlp/network_io.hpp"
#include "reachmlp/oracle.hpp"
#include "reachmlp/reach.hpp"
#include "reachmlp/sensitivity.hpp"
#include "reachmlp/verify.hpp"
