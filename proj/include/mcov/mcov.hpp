#pragma once

#include "mcov/error.hpp"
#include "mcov/subset.hpp"
#include "mcov/gf.hpp"
#include "mcov/matroid.hpp"
#include "mcov/family.hpp"
#include "mcov/flats.hpp"
#include "mcov/io.hpp"
#include "mcov/rng.hpp"
#include "mcov/catalog.hpp"
#include "mcov/budget.hpp"
#include "mcov/cover.hpp"
#include "mcov/structure.hpp"
#include "mcov/pyramid.hpp"
#include "mcov/oracle.hpp"
#include "mcov/harness.hpp"
