use std::ffi::{CStr, CString};
use std::ptr;

use padic_frames_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pf_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn build(p: u32, n: u32, transforms: Option<&str>) -> (PfStatus, *mut PfFrame) {
    let spec = transforms.map(|s| CString::new(s).unwrap());
    let mut frame = ptr::null_mut();
    let status = unsafe {
        pf_frame_build(
            p,
            n,
            spec.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            &mut frame,
        )
    };
    (status, frame)
}

#[test]
fn example_frame_builds_and_verifies() {
    let (status, frame) = build(3, 1, Some("i:0"));
    assert_eq!(status, PfStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe {
        assert_eq!(pf_frame_wavelet_count(frame), 2);
        assert!(!pf_frame_is_orthogonal(frame));
        let mut report = PfReport::default();
        assert_eq!(
            pf_frame_verify(frame, 10, 1e-9, 0, &mut report),
            PfStatus::Ok
        );
        assert!(report.passed);
        assert!(report.parseval_max < 1e-9);
        pf_frame_free(frame);
    }
}

#[test]
fn error_codes_and_messages() {
    let (status, frame) = build(3, 1, Some("ii:0"));
    assert_eq!(status, PfStatus::Infeasible);
    assert!(frame.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(build(4, 1, None).0, PfStatus::BadInput);
    assert_eq!(build(3, 1, Some("iii:0")).0, PfStatus::BadInput);
    unsafe {
        assert_eq!(
            pf_frame_build(3, 1, ptr::null(), ptr::null_mut()),
            PfStatus::NullPointer
        );
        assert_eq!(
            pf_frame_verify(ptr::null(), 1, 1e-9, 0, ptr::null_mut()),
            PfStatus::NullPointer
        );
        assert_eq!(pf_frame_wavelet_count(ptr::null()), 0);
        assert!(pf_frame_to_json(ptr::null()).is_null());
        pf_frame_free(ptr::null_mut());
        pf_string_free(ptr::null_mut());
    }
}

#[test]
fn tight_tolerance_reports_failure() {
    let (_, frame) = build(2, 1, None);
    unsafe {
        let mut report = PfReport::default();
        assert_eq!(
            pf_frame_verify(frame, 5, 1e-18, 0, &mut report),
            PfStatus::VerifyFailed
        );
        assert!(!report.passed);
        pf_frame_free(frame);
    }
}

#[test]
fn json_round_trip_and_mask_values() {
    let (_, frame) = build(3, 1, Some("i:0, ii:4"));
    unsafe {
        let json = pf_frame_to_json(frame);
        assert!(!json.is_null());
        let mut again = ptr::null_mut();
        assert_eq!(pf_frame_from_json(json, &mut again), PfStatus::Ok);
        let text = CStr::from_ptr(json).to_owned();
        pf_string_free(json);

        let len = pf_frame_mask_len(frame);
        assert_eq!(len, 27);
        assert_eq!(pf_frame_mask_len(again), len);
        let (mut re, mut im) = (vec![0.0; len], vec![0.0; len]);
        let (mut re2, mut im2) = (vec![0.0; len], vec![0.0; len]);
        assert_eq!(
            pf_frame_mask_values(frame, re.as_mut_ptr(), im.as_mut_ptr(), len),
            PfStatus::Ok
        );
        assert_eq!(
            pf_frame_mask_values(again, re2.as_mut_ptr(), im2.as_mut_ptr(), len),
            PfStatus::Ok
        );
        assert_eq!((re2[0], im2[0]), (1.0, 0.0));
        assert_eq!((re, im), (re2, im2));
        let mut short = [0.0; 2];
        let mut short_im = [0.0; 2];
        assert_eq!(
            pf_frame_mask_values(frame, short.as_mut_ptr(), short_im.as_mut_ptr(), 2),
            PfStatus::BadInput
        );

        let json2 = pf_frame_to_json(again);
        assert_eq!(CStr::from_ptr(json2), text.as_c_str());
        pf_string_free(json2);

        let junk = CString::new("{\"schema_version\": \"1\"}").unwrap();
        let mut bad = ptr::null_mut();
        assert_eq!(pf_frame_from_json(junk.as_ptr(), &mut bad), PfStatus::Io);
        assert!(bad.is_null());

        pf_frame_free(frame);
        pf_frame_free(again);
    }
}
