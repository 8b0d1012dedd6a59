#pragma once

#include "tumsim/config.hpp"
#include "tumsim/domain.hpp"
#include "tumsim/driver.hpp"
#include "tumsim/errors.hpp"
#include "tumsim/fem.hpp"
#include "tumsim/fields.hpp"
#include "tumsim/geometry.hpp"
#include "tumsim/mechanics.hpp"
#include "tumsim/meshgen.hpp"
#include "tumsim/nutrient.hpp"
#include "tumsim/output.hpp"
#include "tumsim/pslg.hpp"
#include "tumsim/ruppert.hpp"
#include "tumsim/setup.hpp"
#include "tumsim/shapes.hpp"
#include "tumsim/sparse.hpp"
#include "tumsim/transport.hpp"
#include "tumsim/trimesh.hpp"
