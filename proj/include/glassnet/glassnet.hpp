#pragma once

#include "glassnet/core.hpp"
#include "glassnet/coupling.hpp"
#include "glassnet/dynamics.hpp"
#include "glassnet/factorization.hpp"
#include "glassnet/io.hpp"
#include "glassnet/network.hpp"
#include "glassnet/oracle.hpp"
#include "glassnet/random.hpp"
#include "glassnet/signs.hpp"
#include "glassnet/stability.hpp"
