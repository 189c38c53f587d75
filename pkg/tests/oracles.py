"""Frozen reference values produced by make_oracles.py (mpmath, 40 digits)."""

G3 = [[0.3, 1.2, -0.7], [1.1, -0.4, 0.5], [-0.6, 0.9, 1.3]]
LAM = [0.3 + 0.2j, -0.1 + 0.4j, 0.25 - 0.3j]
NU = [0.2 - 0.1j, -0.35 + 0.15j]
XI = [1, 0, 1]
ETA = [0, 1]

GAMMA_POINTS = [0.3 + 0.2j, -2.7 + 1.1j, 5.5 - 3j, -0.5, 1e-3j, 20 + 1j, -7.3 - 0.4j]
LFACTOR_POINTS = [(0.5 + 0.3j, -0.2 + 1j, 1), (2.2, 0.7j, 0), (0.1, -1.3 + 0.5j, 1)]
CONV_POINTS = [(-0.6 + 0.3j, -0.5 - 0.2j, 0, 0), (-0.7 - 0.5j, -0.45 + 1j, 1, 0),
               (-0.55, -0.65 + 0.4j, 1, 1), (-0.5 + 0.1j, -0.6 + 0.2j, 0, 1)]
GAMMA_0 = (1.9803581728234425-1.4145760083733032j)
GAMMA_1 = (-0.044545929693393146-0.03580079366913618j)
GAMMA_2 = (6.2430185174211035+21.474963762080638j)
GAMMA_3 = (-3.544907701811032+0j)
GAMMA_4 = (-0.5772147574234388-999.9990109449864j)
GAMMA_5 = (-1.1684577853016536e+17+2.0133283732238092e+16j)
GAMMA_6 = (3.6766460841425845e-05-0.00018576263816187527j)
LFACTOR_0 = (0.06986449244222184-0.38731343389770295j)
LFACTOR_1 = (0.21320649277951276-0.12673431696739787j)
LFACTOR_2 = (-3.14591332632469-2.778110564236275j)
CONV_0 = (14.537985683019057+8.975933578518367j)
CONV_1 = (0.7285294824324353-2.759499121723075j)
CONV_2 = (-1.508545383557558-4.364956883251503j)
CONV_3 = (2.8890732083270723-0.8396643374977721j)
KERNEL_N2 = (3.032414829172633-1.4234021909927193j)
JET_RR = (2.294585993040151-3.54138353785173j)
JET_LR = (13.68030154911208-20.46010217987356j)
JET_RR_SAME = (-0.8274811934829839+0.10005575062312244j)
SPHERICAL_N1 = (2.2932460064680082-0.4283284590025512j)
RESIDUE_RATIONAL = (0.9190625268488832+0j)
E_FUNCTION = (54.89767593433953-19.32926392775903j)

GAMMA = [GAMMA_0, GAMMA_1, GAMMA_2, GAMMA_3, GAMMA_4, GAMMA_5, GAMMA_6]
LFACTOR = [LFACTOR_0, LFACTOR_1, LFACTOR_2]
CONV = [CONV_0, CONV_1, CONV_2, CONV_3]
