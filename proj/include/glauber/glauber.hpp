#pragma once

#include "glauber/certifier.hpp"
#include "glauber/cutwidth.hpp"
#include "glauber/dynamics.hpp"
#include "glauber/errors.hpp"
#include "glauber/exact.hpp"
#include "glauber/generators.hpp"
#include "glauber/graph.hpp"
#include "glauber/instance_io.hpp"
#include "glauber/parallel.hpp"
#include "glauber/rng.hpp"
#include "glauber/saw.hpp"
#include "glauber/stats.hpp"
#include "glauber/scan.hpp"
