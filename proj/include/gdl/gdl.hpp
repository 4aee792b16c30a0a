#pragma once

#include "gdl/common.hpp"
#include "gdl/tf_core.hpp"
#include "gdl/pointset.hpp"
#include "gdl/deform.hpp"
#include "gdl/frame.hpp"
#include "gdl/certifier.hpp"
#include "gdl/molecule.hpp"
#include "gdl/experiments.hpp"
#include "gdl/report.hpp"
