#ifndef DPGPLATE_DPGPLATE_HPP
#define DPGPLATE_DPGPLATE_HPP

#include "dpgplate/assembly.hpp"
#include "dpgplate/basis.hpp"
#include "dpgplate/config.hpp"
#include "dpgplate/element_system.hpp"
#include "dpgplate/errors.hpp"
#include "dpgplate/exact_solution.hpp"
#include "dpgplate/field_sampler.hpp"
#include "dpgplate/infsup.hpp"
#include "dpgplate/layout.hpp"
#include "dpgplate/material.hpp"
#include "dpgplate/mesh.hpp"
#include "dpgplate/quadrature.hpp"
#include "dpgplate/study.hpp"

#endif
