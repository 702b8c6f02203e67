//! Atomic-unit conversions. Everything internal is in atomic units
//! (hbar = m_e = a_0 = 1); only time is commonly exchanged in femtoseconds.

/// One atomic unit of time in femtoseconds.
pub const AU_TIME_FS: f64 = 2.418_884_3e-2;

/// One hartree in electronvolts.
pub const HARTREE_EV: f64 = 27.211_386_245_988;

/// One hartree in wavenumbers (cm^-1).
pub const HARTREE_CM: f64 = 219_474.631_363_2;

/// One bohr in angstrom.
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_903;

/// One unified atomic mass unit in electron masses.
pub const AMU_ME: f64 = 1_822.888_486_209;

#[inline]
pub fn fs_to_au(t_fs: f64) -> f64 {
    t_fs / AU_TIME_FS
}

#[inline]
pub fn au_to_fs(t_au: f64) -> f64 {
    t_au * AU_TIME_FS
}

/// Rate in a.u. from a time constant given in femtoseconds.
#[inline]
pub fn rate_from_inverse_fs(tau_fs: f64) -> f64 {
    1.0 / fs_to_au(tau_fs)
}
