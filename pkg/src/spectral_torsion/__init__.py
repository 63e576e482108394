"""Exact verification of the spectral torsion functional.

The core pipeline computes W(u^ v^ w^ D_T |D_T|^{-n}) by exact Clifford and
pseudodifferential symbol calculus over Gaussian rationals; the model modules
cover gauge (matrix) coefficients, the doubled space, the noncommutative
torus, and the quantum-disc boundary of SU_q(2).
"""
from __future__ import annotations

from .clifford import (GammaWord, Multivector, canonicalize, chirality,
                       clifford_action, clifford_trace, mul, reduce_word,
                       trace_power)
from .matrices import MatrixQQ
from .scalars import QQi, parse_complex_rational, parse_rational, qi
from .symcalc import (CurvatureJet, HomogeneousSymbol, PiValue, SymbolSum,
                      compose, moment, negative_power, parametrix,
                      sphere_integrate, sphere_volume, sqrt_symbol,
                      unit_symbol)
from .torsion import (ContorsionTensor, FrameConnection, OneForm,
                      ResidueValue, TorsionTensor, chirality_functional,
                      closed_form_torsion, contorsion_from_torsion,
                      dirac_symbol, inverse_power_symbol,
                      levi_civita_from_structure, metric_functional,
                      pipeline_coefficient, residue_of_symbol,
                      spectral_closedness_check, torsion_contraction,
                      torsion_from_contorsion, torsion_functional,
                      volume_functional)
from .almostcommutative import (DoubledEvaluator, DoubledOneForm, EymModel,
                                MatrixOneForm, adjoint_matrix, adjoint_trace,
                                doubled_residue, doubled_spanning_forms,
                                doubled_torsion_free_test, eym_dirac_symbol,
                                eym_torsion_density, left_mult_matrix)
from .qmodels import (CancellationReport, ConvergenceError, FormalSeries,
                      QuantumDiscElement, Suq2DiracSpec, TorusElement,
                      antisymmetric_theta, disc_represent,
                      disc_truncated_trace, suq2_paired_combination,
                      suq2_residue_cancellation, tau0_dn, tau0_up, tau1,
                      torus_derive, torus_exp, torus_mul, torus_trace,
                      torus_trace_identity, zstar_z)
from .sampling import (random_anti_hermitian_traceless, random_contorsion,
                       random_fraction, random_one_form, random_qqi,
                       random_theta, random_torsion, random_torus_h, seeded)

__version__ = "0.1.0"

__all__ = [
    "CancellationReport", "ContorsionTensor", "ConvergenceError",
    "CurvatureJet", "DoubledEvaluator", "DoubledOneForm", "EymModel",
    "FormalSeries", "FrameConnection", "GammaWord", "HomogeneousSymbol",
    "MatrixOneForm", "MatrixQQ", "Multivector", "OneForm", "PiValue", "QQi",
    "QuantumDiscElement", "ResidueValue", "Suq2DiracSpec", "SymbolSum",
    "TorsionTensor", "TorusElement", "adjoint_matrix", "adjoint_trace",
    "antisymmetric_theta", "canonicalize", "chirality",
    "chirality_functional", "clifford_action", "clifford_trace",
    "closed_form_torsion", "compose", "contorsion_from_torsion",
    "dirac_symbol", "disc_represent", "disc_truncated_trace",
    "doubled_residue", "doubled_spanning_forms", "doubled_torsion_free_test",
    "eym_dirac_symbol", "eym_torsion_density", "inverse_power_symbol",
    "left_mult_matrix", "levi_civita_from_structure", "metric_functional",
    "moment", "mul", "negative_power", "parametrix",
    "parse_complex_rational", "parse_rational", "pipeline_coefficient", "qi",
    "random_anti_hermitian_traceless", "random_contorsion",
    "random_fraction", "random_one_form", "random_qqi", "random_theta",
    "random_torsion", "random_torus_h", "reduce_word", "residue_of_symbol",
    "seeded", "spectral_closedness_check", "sphere_integrate",
    "sphere_volume", "sqrt_symbol", "suq2_paired_combination",
    "suq2_residue_cancellation", "tau0_dn", "tau0_up", "tau1",
    "torsion_contraction", "torsion_from_contorsion", "torsion_functional",
    "torus_derive", "torus_exp", "torus_mul", "torus_trace",
    "torus_trace_identity", "trace_power", "unit_symbol",
    "volume_functional", "zstar_z",
]
