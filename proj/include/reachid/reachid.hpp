#pragma once

#include "reachid/error.hpp"
#include "reachid/linalg.hpp"
#include "reachid/setgeom.hpp"
#include "reachid/reach.hpp"
#include "reachid/diagnostics.hpp"
#include "reachid/identify.hpp"
#include "reachid/io.hpp"
#include "reachid/svg.hpp"
#include "reachid/commands.hpp"
