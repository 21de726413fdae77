#pragma once

#include "core.hpp"
#include "simplex.hpp"
#include "kriging.hpp"
#include "acquisition.hpp"
#include "qmc.hpp"
#include "sir.hpp"
#include "strategies.hpp"
#include "testfns.hpp"
#include "subprocess.hpp"
#include "bench.hpp"
