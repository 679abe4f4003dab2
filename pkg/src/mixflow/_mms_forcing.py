"""Generated by scripts/generate_mms.py; do not edit by hand."""
import numpy as np

PARAMS = ('c_v', 'm1', 'm2', 'e1', 'e2', 'c2', 'gamma_plus', 'mu0', 'mu1', 'kappa0', 'alpha', 'd0', 'rate',)


def primitives(x, t):
    """(rho, u, theta, Y1) of the manufactured solution."""
    rho = 2 - 1/5*np.sin(t - 2*np.pi*x)
    u = (1/5)*np.cos(2*t + 2*np.pi*x) + 1/2
    theta = (1/5)*np.cos(t - 2*np.pi*x) + 1
    Y1 = (1/5)*np.sin(t + 2*np.pi*x) + 1/2
    return rho, u, theta, Y1


def forcing(x, t, c_v, m1, m2, e1, e2, c2, gamma_plus, mu0, mu1, kappa0, alpha, d0, rate):
    """Rows: rho, rho*u, rho*E, rho_1, rho_2."""
    x0 = np.pi*x
    x1 = 2*x0
    x2 = t - x1
    x3 = np.cos(x2)
    x4 = 5*x3
    x5 = 2*t + 2*x0
    x6 = np.sin(x5)
    x7 = np.sin(x2)
    x8 = x7 - 10
    x9 = x6*x8
    x10 = np.pi*x9
    x11 = 2*x10
    x12 = np.cos(x5)
    x13 = 2*x12 + 5
    x14 = x13*x3
    x15 = np.pi*x14
    x16 = np.pi**2
    x17 = mu1*x16
    x18 = x12*x17*x8
    x19 = x13**2
    x20 = np.pi*x3
    x21 = m1**(-1.0)
    x22 = t + x1
    x23 = np.cos(x22)
    x24 = x3 + 5
    x25 = x24*x8
    x26 = x23*x25
    x27 = np.pi*x26
    x28 = m2**(-1.0)
    x29 = np.sin(x22)
    x30 = 2*x29
    x31 = x30 + 5
    x32 = x21*x31
    x33 = x7*x8
    x34 = x32*x33
    x35 = x20*x24
    x36 = x30 - 5
    x37 = x28*x36
    x38 = x33*x37
    x39 = x8**(-1.0)
    x40 = 2 - 1/5*x7
    x41 = x40**gamma_plus
    x42 = c2*x39*x41
    x43 = x3*x7
    x44 = ((1/5)*x3 + 1)**alpha
    x45 = 40*kappa0*(x44 + 1)
    x46 = x7 - 15
    x47 = x16*x3
    x48 = x24**(-1.0)
    x49 = 40*x24
    x50 = 5*x39
    x51 = gamma_plus - 1
    x52 = x40**x51
    x53 = c2/gamma_plus
    x54 = c_v*x49 + 20*e1*x31 - 20*e2*x36 + x19 + 200*x53*(-x50 - 1 + (x52 - 1)/x51)
    x55 = 5*e1
    x56 = 5*e2
    x57 = x13*x6
    x58 = -x8
    x59 = x58**(-1.0)
    x60 = x3*x53
    x61 = 4*x8
    x62 = x24*x61
    x63 = c_v + x21
    x64 = x3 + 10
    x65 = -x32 + x37
    x66 = x65**(-1.0)
    x67 = x21*x23
    x68 = 2*x8
    x69 = x24*x68
    x70 = x23*x28
    x71 = x24*x3
    x72 = x32*x71
    x73 = x37*x71
    x74 = 10*x21*x24*x3*x31 - 20*x21*x26 - x31*(-x34 + x38 - x67*x69 + x69*x70 + x72 - x73) - 10*x34
    x75 = x24*x63 + x55
    x76 = c_v + x28
    x77 = -x36
    x78 = x28*x77
    x79 = x71*x78
    x80 = x24*x58
    x81 = 20*x80
    x82 = x58*x7
    x83 = x78*x82
    x84 = 2*x23
    x85 = x80*x84
    x86 = x21*x85 - x28*x85 + x32*x82 + x72 + x79 + x83
    x87 = x70*x81 + x77*x86 - 10*x79 - 10*x83
    x88 = d0*x64
    x89 = x16*x48*x66
    x90 = x7*x89
    x91 = d0*x90
    x92 = x24*x76 + x56
    x93 = (4/5)*x92
    x94 = x47*x48*x66
    x95 = (4/5)*x75
    x96 = x39*x74*x88*x95
    x97 = 10*x23
    x98 = x24**(-2.0)
    x99 = x65**(-2.0)
    x100 = x16*x86*x98*x99
    x101 = x3*x49
    x102 = 40*x82
    x103 = 20*x43
    x104 = x29*x81
    x105 = x24*x7
    x106 = x105*x32
    x107 = x3*x58
    x108 = x107*x32
    x109 = x84*x86
    x110 = 4*x23
    x111 = x110*x21
    x112 = x110*x28
    x113 = 2*x43
    x114 = x105*x78
    x115 = x30*x80
    x116 = x107*x78
    x117 = x106 - x108 + x111*x71 + x111*x82 - x112*x71 - x112*x82 + x113*x32 + x113*x78 + x114 - x115*x21 + x115*x28 - x116
    x118 = -x101*x67 - x102*x67 - x103*x32 + x104*x21 - 10*x106 + 10*x108 + x109 + x117*x31
    x119 = x88*x89
    x120 = x101*x70 + x102*x70 - x103*x78 - x104*x28 - x109 - 10*x114 + 10*x116 + x117*x77
    x121 = 4*x88
    x122 = x121*x89
    x123 = x121*x39
    x124 = x123*x74
    x125 = rate*x25*x31 + np.pi*x13*x23*x68 + x8*x97
    x126 = x123*x87
    f0 = (1/25)*x11 + (1/25)*x15 - 1/25*x4
    f1 = (2/125)*x10*x13 - 1/50*x14 + (8/25)*x17*x3*x6 - 8/25*x18 + (1/250)*x19*x20 - 2*x20*x42 - 2/125*x21*x27 + (2/125)*x27*x28 + (1/125)*x32*x35 - 1/125*np.pi*x34 - 1/125*x35*x37 + (1/125)*np.pi*x38 + (2/25)*x9
    f2 = (4/25)*alpha*kappa0*x16*x44*x46*x48*x7**2 + (2/625)*d0*x16*x3*x39*x48*x64*x66*x87*x92 + (2/625)*d0*x16*x39*x64*x86*x87*x92*x98*x99 + (2/625)*d0*x16*x48*x63*x64*x66*x7*x74 + (2/625)*d0*x16*x48*x66*x7*x74*x75 + (4/125)*mu1*x13*x16*x3*x6 + (8/125)*mu1*x16*x6**2*x8 - 1/250*x100*x96 - 1/250*x118*x119*x95 - 1/250*x119*x120*x93 - 4/125*x13*x18 + (1/5000)*np.pi*x13*(4*x21*x24*x3*x31 - 8*x21*x26 + 8*x23*x24*x28*x8 + 4*x28*x36*x7*x8 - 1000*x3*x42 + x3*x54 - x32*x61*x7 - x61*(10*c_v*x7 + 10*e1*x23 - e2*x97 - 50*x39*x60*(x50 + x52) - x57) - 4*x73) - 1/250*x16*x43*x45 - 1/1000*x3*x54 - 1/250*x45*x46*x47 - 1/2500*np.pi*x6*(-x32*x62 + x37*x62 + 1000*x53*(x41 - 1) - x54*x8) - 2/625*x76*x87*x88*x90 + (1/125)*x8*(5*c_v*x7 - x23*x55 + x23*x56 + x57 - 25*x59*x60*(-x52 + 5*x59)) - 1/250*x87*x91*x93 - 1/250*x94*x96
    f3 = (2/125)*d0*x16*x48*x66*x7*x74 - 1/250*x100*x124 - 1/250*x118*x122 - 1/250*x124*x94 - 1/250*x125 + (1/250)*np.pi*x13*x3*x31 - 1/250*x31*x4 + (1/125)*np.pi*x31*x6*x8
    f4 = (1/250)*x100*x126 - 1/250*x11*x36 - 1/250*x120*x122 + (1/250)*x125 + (1/250)*x126*x94 - 1/250*x15*x36 + (1/250)*x36*x4 - 2/125*x87*x91
    return tuple(np.broadcast_to(f, np.shape(x)) for f in (f0, f1, f2, f3, f4))
