#pragma once

#include "errors.hpp"
#include "json_format.hpp"
#include "matrix.hpp"
#include "clements.hpp"
#include "hybrid.hpp"
#include "sim_basis.hpp"
#include "oamnet.hpp"
#include "photosim.hpp"
#include "diagram.hpp"
