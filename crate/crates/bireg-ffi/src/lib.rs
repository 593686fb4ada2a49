//! C ABI over the bireg library.
//!
//! Conventions:
//! * Handles (`BiregParams`, `BiregGraph`) are opaque; create them with the
//!   `*_new`/sampler functions and release them with the matching `*_free`.
//! * Every fallible function returns a [`BiregStatus`]; out-parameters are
//!   only written on `BIREG_STATUS_OK`.
//! * String outputs copy into a caller buffer; when the buffer is too
//!   small the required size (including the NUL terminator) is reported
//!   through `written` together with `BIREG_STATUS_BUFFER_TOO_SMALL`.
//! * Handles are immutable after construction and safe to share across
//!   threads; freeing is the only exclusive operation.

use bireg::colored::ColoredInstance;
use bireg::couple::ProbOracle;
use bireg::enumerate::{self, Constraint};
use bireg::graph::{BipartiteGraph, Side, Vertex};
use bireg::params::BiregularParams;
use bireg::pseudo::{self, CheckMode};
use bireg::sample::{self, stream_rng};
use num_rational::BigRational;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BiregStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooLarge = 3,
    Infeasible = 4,
    BufferTooSmall = 5,
    NotFound = 6,
    Internal = 7,
}

/// Opaque instance parameters (n1, n2, p).
pub struct BiregParams(BiregularParams);

/// Opaque bipartite graph.
pub struct BiregGraph(BipartiteGraph);

fn guard<F: FnOnce() -> BiregStatus>(f: F) -> BiregStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => BiregStatus::Internal,
    }
}

unsafe fn write_string(
    text: &str,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> BiregStatus {
    let needed = text.len() + 1;
    if !written.is_null() {
        *written = needed;
    }
    if buf.is_null() || cap < needed {
        return BiregStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    BiregStatus::Ok
}

/// Create instance parameters with density `p = p_num / p_den`.
/// Fails unless `p*n2` and `p*n1` are integers in range.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bireg_params_new(
    n1: u64,
    n2: u64,
    p_num: u64,
    p_den: u64,
    out: *mut *mut BiregParams,
) -> BiregStatus {
    guard(|| {
        if out.is_null() {
            return BiregStatus::NullPointer;
        }
        if p_den == 0 {
            return BiregStatus::InvalidArgument;
        }
        let p = BigRational::new(p_num.into(), p_den.into());
        match BiregularParams::new(n1, n2, p) {
            Ok(params) => {
                *out = Box::into_raw(Box::new(BiregParams(params)));
                BiregStatus::Ok
            }
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// # Safety
/// `params` must come from `bireg_params_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bireg_params_free(params: *mut BiregParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Left degree `d1 = p*n2`; zero when `params` is null.
///
/// # Safety
/// `params` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bireg_params_d1(params: *const BiregParams) -> u64 {
    if params.is_null() {
        return 0;
    }
    (*params).0.d1()
}

/// Exact count of biregular graphs, as a decimal string.
///
/// # Safety
/// Pointer arguments must be valid (buffer of `cap` bytes).
#[no_mangle]
pub unsafe extern "C" fn bireg_count(
    params: *const BiregParams,
    cap_n: u64,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> BiregStatus {
    guard(|| {
        if params.is_null() {
            return BiregStatus::NullPointer;
        }
        match enumerate::count_biregular_capped(&(*params).0, &Constraint::none(), cap_n as u128) {
            Ok(count) => write_string(&count.to_string(), buf, cap, written),
            Err(enumerate::EnumerateError::TooLarge { .. }) => BiregStatus::TooLarge,
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// Exactly uniform biregular sample from the stream `(seed, stream)`.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bireg_sample_exact(
    params: *const BiregParams,
    seed: u64,
    stream: u64,
    out: *mut *mut BiregGraph,
) -> BiregStatus {
    guard(|| {
        if params.is_null() || out.is_null() {
            return BiregStatus::NullPointer;
        }
        let mut rng = stream_rng(seed, stream);
        match sample::sample_biregular_exact(&(*params).0, &mut rng) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(BiregGraph(g)));
                BiregStatus::Ok
            }
            Err(sample::SampleError::Enumerate(enumerate::EnumerateError::TooLarge {
                ..
            })) => BiregStatus::TooLarge,
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// Uniform m-edge subgraph of the complete bipartite graph.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bireg_sample_gnm(
    n1: u64,
    n2: u64,
    m: u64,
    seed: u64,
    stream: u64,
    out: *mut *mut BiregGraph,
) -> BiregStatus {
    guard(|| {
        if out.is_null() {
            return BiregStatus::NullPointer;
        }
        let mut rng = stream_rng(seed, stream);
        match sample::sample_gnm(n1 as usize, n2 as usize, m, &mut rng) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(BiregGraph(g)));
                BiregStatus::Ok
            }
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// # Safety
/// `graph` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_free(graph: *mut BiregGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of edges; zero for null.
///
/// # Safety
/// `graph` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_edge_count(graph: *const BiregGraph) -> usize {
    if graph.is_null() {
        return 0;
    }
    (*graph).0.edge_count()
}

/// 1 if the edge is present, 0 if absent, -1 on bad input.
///
/// # Safety
/// `graph` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_has_edge(
    graph: *const BiregGraph,
    i: usize,
    j: usize,
) -> i32 {
    if graph.is_null() {
        return -1;
    }
    let g = &(*graph).0;
    if i >= g.n1() || j >= g.n2() {
        return -1;
    }
    i32::from(g.has_edge(i, j))
}

/// Complement within the complete bipartite graph.
///
/// # Safety
/// `graph` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_complement(
    graph: *const BiregGraph,
    out: *mut *mut BiregGraph,
) -> BiregStatus {
    guard(|| {
        if graph.is_null() || out.is_null() {
            return BiregStatus::NullPointer;
        }
        *out = Box::into_raw(Box::new(BiregGraph((*graph).0.complement())));
        BiregStatus::Ok
    })
}

/// Number of common neighbors of two same-side vertices
/// (`on_v2 = 0` for a V1 pair, nonzero for a V2 pair).
///
/// # Safety
/// `graph` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_codegree(
    graph: *const BiregGraph,
    on_v2: i32,
    u: usize,
    v: usize,
    out: *mut usize,
) -> BiregStatus {
    guard(|| {
        if graph.is_null() || out.is_null() {
            return BiregStatus::NullPointer;
        }
        let side = if on_v2 == 0 { Side::V1 } else { Side::V2 };
        match (*graph).0.codegree(Vertex { side, index: u }, Vertex { side, index: v }) {
            Ok(c) => {
                *out = c;
                BiregStatus::Ok
            }
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// Serialize to the library's edge-list format (header `n1 n2`, then one
/// `i j` line per edge, row-major).
///
/// # Safety
/// Pointer arguments must be valid (buffer of `cap` bytes).
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_to_edge_list(
    graph: *const BiregGraph,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> BiregStatus {
    guard(|| {
        if graph.is_null() {
            return BiregStatus::NullPointer;
        }
        let mut text = Vec::new();
        if (*graph).0.write_edge_list(&mut text).is_err() {
            return BiregStatus::Internal;
        }
        write_string(&String::from_utf8(text).expect("ascii"), buf, cap, written)
    })
}

/// Parse the edge-list format.
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bireg_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut BiregGraph,
) -> BiregStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return BiregStatus::NullPointer;
        }
        let bytes = std::ffi::CStr::from_ptr(text).to_bytes();
        match BipartiteGraph::read_edge_list(bytes) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(BiregGraph(g)));
                BiregStatus::Ok
            }
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// Conditional edge probability `P(eta_{t+1} = e | R(t) = prefix)` as an
/// exact rational string "num/den".
///
/// # Safety
/// Pointer arguments must be valid (buffer of `cap` bytes).
#[no_mangle]
pub unsafe extern "C" fn bireg_conditional_edge_prob(
    params: *const BiregParams,
    prefix: *const BiregGraph,
    i: usize,
    j: usize,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> BiregStatus {
    guard(|| {
        if params.is_null() || prefix.is_null() {
            return BiregStatus::NullPointer;
        }
        match enumerate::conditional_edge_prob(&(*params).0, &(*prefix).0, (i, j)) {
            Ok(prob) => {
                let text = format!("{}/{}", prob.numer(), prob.denom());
                write_string(&text, buf, cap, written)
            }
            Err(enumerate::EnumerateError::TooLarge { .. }) => BiregStatus::TooLarge,
            Err(enumerate::EnumerateError::Inadmissible) => BiregStatus::Infeasible,
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// Exhaustive jumbledness check; `pass` receives 1 or 0.
///
/// # Safety
/// `graph` and `pass` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bireg_jumbledness_check(
    graph: *const BiregGraph,
    pi: f64,
    delta: f64,
    pass: *mut i32,
) -> BiregStatus {
    guard(|| {
        if graph.is_null() || pass.is_null() {
            return BiregStatus::NullPointer;
        }
        match pseudo::jumbledness_check(&(*graph).0, pi, delta, CheckMode::Exhaustive) {
            Ok(cert) => {
                *pass = i32::from(cert.pass);
                BiregStatus::Ok
            }
            Err(pseudo::PseudoError::CapExceeded(..)) => BiregStatus::TooLarge,
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// Shortest alternating cycle through `(i, j)` in the blue-red coloring
/// induced by `prefix ⊆ h`; `found` gets 1/0 and `length` the cycle length
/// when found.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn bireg_find_alternating_cycle(
    prefix: *const BiregGraph,
    h: *const BiregGraph,
    i: usize,
    j: usize,
    max_len: usize,
    found: *mut i32,
    length: *mut usize,
) -> BiregStatus {
    guard(|| {
        if prefix.is_null() || h.is_null() || found.is_null() || length.is_null() {
            return BiregStatus::NullPointer;
        }
        let inst = match ColoredInstance::new((*prefix).0.clone(), (*h).0.clone()) {
            Ok(inst) => inst,
            Err(_) => return BiregStatus::InvalidArgument,
        };
        match pseudo::find_alternating_cycle(&inst.blue_red(), (i, j), max_len) {
            Ok(Some(walk)) => {
                *found = 1;
                *length = walk.len();
                BiregStatus::Ok
            }
            Ok(None) => {
                *found = 0;
                *length = 0;
                BiregStatus::Ok
            }
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

/// One sandwich coupling run with the degenerate desk-scale schedule
/// (zeroed log constants, `gamma` as given); reports success of
/// `G(m) ⊆ H` and `|S|`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn bireg_sandwich_run(
    params: *const BiregParams,
    gamma: f64,
    m: u64,
    seed: u64,
    stream: u64,
    success: *mut i32,
    s_size: *mut usize,
) -> BiregStatus {
    guard(|| {
        if params.is_null() || success.is_null() || s_size.is_null() {
            return BiregStatus::NullPointer;
        }
        if !(0.0..=1.0).contains(&gamma) {
            return BiregStatus::InvalidArgument;
        }
        let p = &(*params).0;
        let mut consts = bireg::schedule::ScheduleConstants::zeroed_log_terms();
        consts.gamma = Some(gamma);
        let schedule = match bireg::schedule::build_schedule(p, 1.0, 1.0, Some(consts)) {
            Ok(s) => s,
            Err(_) => return BiregStatus::Infeasible,
        };
        let oracle = ProbOracle::new(p);
        let mut rng = stream_rng(seed, stream);
        let opts = bireg::couple::RunOpts { m: Some(m as u128), ..Default::default() };
        match bireg::couple::run_sandwich(&schedule, &oracle, &mut rng, &opts) {
            Ok(out) => {
                *success = i32::from(out.success);
                *s_size = out.s_size;
                BiregStatus::Ok
            }
            Err(bireg::couple::CoupleError::OracleUnavailable(_)) => BiregStatus::TooLarge,
            Err(_) => BiregStatus::InvalidArgument,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn params_lifecycle_and_count() {
        unsafe {
            let mut params: *mut BiregParams = ptr::null_mut();
            assert_eq!(bireg_params_new(4, 4, 1, 2, &mut params), BiregStatus::Ok);
            assert_eq!(bireg_params_d1(params), 2);
            let mut buf = [0i8; 32];
            let mut written = 0usize;
            assert_eq!(
                bireg_count(params, 36, buf.as_mut_ptr(), buf.len(), &mut written),
                BiregStatus::Ok
            );
            let text = std::ffi::CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
            assert_eq!(text, "90");
            assert_eq!(written, 3);
            bireg_params_free(params);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        unsafe {
            let mut params: *mut BiregParams = ptr::null_mut();
            assert_eq!(
                bireg_params_new(4, 4, 1, 3, &mut params),
                BiregStatus::InvalidArgument
            );
            assert_eq!(bireg_params_new(4, 4, 1, 0, &mut params), BiregStatus::InvalidArgument);
            assert_eq!(
                bireg_params_new(4, 4, 1, 2, ptr::null_mut()),
                BiregStatus::NullPointer
            );
        }
    }

    #[test]
    fn buffer_too_small_reports_needed_size() {
        unsafe {
            let mut params: *mut BiregParams = ptr::null_mut();
            bireg_params_new(4, 4, 1, 2, &mut params);
            let mut buf = [0i8; 2];
            let mut written = 0usize;
            assert_eq!(
                bireg_count(params, 36, buf.as_mut_ptr(), buf.len(), &mut written),
                BiregStatus::BufferTooSmall
            );
            assert_eq!(written, 3);
            bireg_params_free(params);
        }
    }

    #[test]
    fn sampling_and_graph_accessors() {
        unsafe {
            let mut params: *mut BiregParams = ptr::null_mut();
            bireg_params_new(4, 4, 1, 2, &mut params);
            let mut graph: *mut BiregGraph = ptr::null_mut();
            assert_eq!(bireg_sample_exact(params, 7, 0, &mut graph), BiregStatus::Ok);
            assert_eq!(bireg_graph_edge_count(graph), 8);
            // same stream reproduces the same graph
            let mut again: *mut BiregGraph = ptr::null_mut();
            bireg_sample_exact(params, 7, 0, &mut again);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(
                        bireg_graph_has_edge(graph, i, j),
                        bireg_graph_has_edge(again, i, j)
                    );
                }
            }
            let mut comp: *mut BiregGraph = ptr::null_mut();
            assert_eq!(bireg_graph_complement(graph, &mut comp), BiregStatus::Ok);
            assert_eq!(bireg_graph_edge_count(comp), 8);
            let mut cod = 0usize;
            assert_eq!(bireg_graph_codegree(graph, 0, 0, 1, &mut cod), BiregStatus::Ok);
            assert!(cod <= 2);
            assert_eq!(
                bireg_graph_codegree(graph, 0, 1, 1, &mut cod),
                BiregStatus::InvalidArgument
            );
            bireg_graph_free(graph);
            bireg_graph_free(again);
            bireg_graph_free(comp);
            bireg_params_free(params);
        }
    }

    #[test]
    fn edge_list_round_trip() {
        unsafe {
            let mut graph: *mut BiregGraph = ptr::null_mut();
            assert_eq!(bireg_sample_gnm(3, 5, 4, 11, 0, &mut graph), BiregStatus::Ok);
            let mut buf = [0i8; 256];
            let mut written = 0usize;
            assert_eq!(
                bireg_graph_to_edge_list(graph, buf.as_mut_ptr(), buf.len(), &mut written),
                BiregStatus::Ok
            );
            let mut back: *mut BiregGraph = ptr::null_mut();
            assert_eq!(bireg_graph_from_edge_list(buf.as_ptr(), &mut back), BiregStatus::Ok);
            assert_eq!(bireg_graph_edge_count(back), 4);
            for i in 0..3 {
                for j in 0..5 {
                    assert_eq!(bireg_graph_has_edge(graph, i, j), bireg_graph_has_edge(back, i, j));
                }
            }
            bireg_graph_free(graph);
            bireg_graph_free(back);
        }
    }

    #[test]
    fn conditional_probability_string() {
        unsafe {
            let mut params: *mut BiregParams = ptr::null_mut();
            bireg_params_new(4, 4, 1, 2, &mut params);
            let mut prefix: *mut BiregGraph = ptr::null_mut();
            let text = std::ffi::CString::new("4 4\n0 0\n").unwrap();
            bireg_graph_from_edge_list(text.as_ptr(), &mut prefix);
            let mut buf = [0i8; 64];
            let mut written = 0usize;
            assert_eq!(
                bireg_conditional_edge_prob(
                    params,
                    prefix,
                    0,
                    1,
                    buf.as_mut_ptr(),
                    buf.len(),
                    &mut written
                ),
                BiregStatus::Ok
            );
            let text = std::ffi::CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
            assert_eq!(text, "1/21");
            bireg_graph_free(prefix);
            bireg_params_free(params);
        }
    }

    #[test]
    fn jumbledness_and_cycles() {
        unsafe {
            let mut k: *mut BiregGraph = ptr::null_mut();
            let complete = std::ffi::CString::new("2 2\n0 0\n0 1\n1 0\n1 1\n").unwrap();
            bireg_graph_from_edge_list(complete.as_ptr(), &mut k);
            let mut pass = -1;
            assert_eq!(bireg_jumbledness_check(k, 1.0, 0.01, &mut pass), BiregStatus::Ok);
            assert_eq!(pass, 1);
            // blue = H = matching inside K_{2,2}, G empty
            let mut h: *mut BiregGraph = ptr::null_mut();
            let matching = std::ffi::CString::new("2 2\n0 0\n1 1\n").unwrap();
            bireg_graph_from_edge_list(matching.as_ptr(), &mut h);
            let mut empty: *mut BiregGraph = ptr::null_mut();
            let header_only = std::ffi::CString::new("2 2\n").unwrap();
            bireg_graph_from_edge_list(header_only.as_ptr(), &mut empty);
            let (mut found, mut len) = (-1, 0usize);
            assert_eq!(
                bireg_find_alternating_cycle(empty, h, 0, 0, 8, &mut found, &mut len),
                BiregStatus::Ok
            );
            assert_eq!(found, 1);
            assert_eq!(len, 4);
            bireg_graph_free(k);
            bireg_graph_free(h);
            bireg_graph_free(empty);
        }
    }

    #[test]
    fn sandwich_run_smoke() {
        unsafe {
            let mut params: *mut BiregParams = ptr::null_mut();
            bireg_params_new(4, 4, 1, 2, &mut params);
            let (mut success, mut s_size) = (-1, 0usize);
            assert_eq!(
                bireg_sandwich_run(params, 0.25, 6, 9, 0, &mut success, &mut s_size),
                BiregStatus::Ok
            );
            assert!(success == 0 || success == 1);
            assert!(s_size <= 8);
            bireg_params_free(params);
        }
    }
}
