//! Fixtures and request helpers shared by the service tests.

#![allow(dead_code)]

use axum::body::{Body, Bytes};
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use segstudio::{write_nrrd, Encoding, Mask, VolumeGeometry};
use segstudio_service::{router, AppState, ServiceConfig};
use tempfile::TempDir;
use tower::ServiceExt;

pub const SQUARE_META: &str = r#"{"sizes":[20,20,10],"space_origin":[0,0,0],"space_directions":[[1,0,0],[0,1,0],[0,0,1]],"space":"right-anterior-superior"}"#;

fn vtk(points: &[[f64; 3]]) -> String {
    let mut s = String::from(
        "# vtk DataFile Version 3.0\nfixture mode=index_space\nASCII\nDATASET POLYDATA\n",
    );
    s += &format!("POINTS {} float\n", points.len());
    for p in points {
        s += &format!("{} {} {}\n", p[0], p[1], p[2]);
    }
    s += &format!("POLYGONS 1 {}\n{}", points.len() + 1, points.len());
    for i in 0..points.len() {
        s += &format!(" {i}");
    }
    s + "\n"
}

/// (2,2)(12,2)(12,12)(2,12) on slice 5 of a 20×20×10 identity grid.
pub fn square_vtk() -> String {
    vtk(&[
        [2.0, 2.0, 5.0],
        [12.0, 2.0, 5.0],
        [12.0, 12.0, 5.0],
        [2.0, 12.0, 5.0],
    ])
}

pub fn bowtie_vtk() -> String {
    vtk(&[
        [2.0, 2.0, 3.0],
        [12.0, 12.0, 3.0],
        [12.0, 2.0, 3.0],
        [2.0, 12.0, 3.0],
    ])
}

/// Slice 15 on a grid only 10 deep.
pub fn out_of_range_vtk() -> String {
    vtk(&[[2.0, 2.0, 15.0], [12.0, 2.0, 15.0], [12.0, 12.0, 15.0]])
}

/// Squares on every slice, so progress passes through many values.
pub fn tall_vtk() -> String {
    let mut s = String::from(
        "# vtk DataFile Version 3.0\nfixture mode=index_space\nASCII\nDATASET POLYDATA\n",
    );
    s += "POINTS 40 float\n";
    for k in 0..10 {
        for (x, y) in [(1, 1), (18, 1), (18, 18), (1, 18)] {
            s += &format!("{x} {y} {k}\n");
        }
    }
    s += "POLYGONS 10 50\n";
    for k in 0..10 {
        s += &format!("4 {} {} {} {}\n", 4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3);
    }
    s
}

fn nrrd_2x2x2(space: &str, origin: &str) -> Vec<u8> {
    let mut b = format!(
        "NRRD0004\ntype: uchar\ndimension: 3\nsizes: 2 2 2\nspace: {space}\nspace directions: (1,0,0) (0,1,0) (0,0,1)\nspace origin: {origin}\nencoding: raw\n\n"
    )
    .into_bytes();
    b.extend(0u8..8);
    b
}

pub fn minimal_nrrd() -> Vec<u8> {
    nrrd_2x2x2("right-anterior-superior", "(0,0,0)")
}

pub fn lps_nrrd() -> Vec<u8> {
    nrrd_2x2x2("left-posterior-superior", "(5,6,7)")
}

/// A mask on `sizes` (unit spacing) with the half-open box `lo..hi` set.
pub fn box_mask(sizes: [usize; 3], lo: [usize; 3], hi: [usize; 3]) -> Mask {
    let mut m = Mask::empty(VolumeGeometry::identity(sizes).unwrap(), 1).unwrap();
    for k in lo[2]..hi[2] {
        for j in lo[1]..hi[1] {
            for i in lo[0]..hi[0] {
                m.set(i, j, k, true);
            }
        }
    }
    m
}

pub fn mask_nrrd(mask: &Mask) -> Vec<u8> {
    write_nrrd(&mask.to_volume(), Encoding::Gzip)
}

/// The 64-voxel boxes overlapping in 32 voxels on an 8×4×4 grid.
pub fn half_dice_pair() -> (Vec<u8>, Vec<u8>) {
    (
        mask_nrrd(&box_mask([8, 4, 4], [0, 0, 0], [4, 4, 4])),
        mask_nrrd(&box_mask([8, 4, 4], [2, 0, 0], [6, 4, 4])),
    )
}

pub struct TestApp {
    pub app: Router,
    pub state: AppState,
    pub dir: TempDir,
}

pub fn test_app(tweak: impl FnOnce(&mut ServiceConfig)) -> TestApp {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ServiceConfig {
        workdir: dir.path().join("jobs"),
        workers: 2,
        ..ServiceConfig::default()
    };
    tweak(&mut config);
    let state = AppState::new(config).unwrap();
    TestApp {
        app: router(state.clone()),
        state,
        dir,
    }
}

pub const BOUNDARY: &str = "segstudio-test-boundary-5b1e";

pub fn multipart_body(parts: &[(&str, &[u8])]) -> Vec<u8> {
    let mut body = Vec::new();
    for (name, data) in parts {
        body.extend(
            format!(
                "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"{name}\"; filename=\"{name}.bin\"\r\nContent-Type: application/octet-stream\r\n\r\n"
            )
            .as_bytes(),
        );
        body.extend_from_slice(data);
        body.extend(b"\r\n");
    }
    body.extend(format!("--{BOUNDARY}--\r\n").as_bytes());
    body
}

pub fn multipart_request(uri: &str, parts: &[(&str, &[u8])]) -> Request<Body> {
    Request::builder()
        .method(Method::POST)
        .uri(uri)
        .header(
            header::CONTENT_TYPE,
            format!("multipart/form-data; boundary={BOUNDARY}"),
        )
        .body(Body::from(multipart_body(parts)))
        .unwrap()
}

pub fn get(uri: &str) -> Request<Body> {
    Request::builder().uri(uri).body(Body::empty()).unwrap()
}

pub fn post(uri: &str) -> Request<Body> {
    Request::builder()
        .method(Method::POST)
        .uri(uri)
        .body(Body::empty())
        .unwrap()
}

pub async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Bytes) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes())
}

pub async fn send_json(app: &Router, req: Request<Body>) -> (StatusCode, serde_json::Value) {
    let (status, body) = send(app, req).await;
    let value = serde_json::from_slice(&body)
        .unwrap_or_else(|_| panic!("not JSON ({status}): {}", String::from_utf8_lossy(&body)));
    (status, value)
}

pub fn error_code(body: &serde_json::Value) -> &str {
    body["error"]["code"].as_str().expect("error body")
}

pub async fn create_job(app: &Router, vtk: &str, meta: &str) -> String {
    let (status, body) = send_json(
        app,
        multipart_request(
            "/api/jobs",
            &[("contours", vtk.as_bytes()), ("meta", meta.as_bytes())],
        ),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["job_id"].as_str().unwrap().to_string()
}

/// Poll until the job leaves `running`, returning every progress value seen.
pub async fn poll_until_settled(app: &Router, id: &str) -> (serde_json::Value, Vec<u64>) {
    let mut seen = Vec::new();
    for _ in 0..2000 {
        let (status, body) = send_json(app, get(&format!("/api/jobs/{id}/progress"))).await;
        assert_eq!(status, StatusCode::OK);
        seen.push(body["progress"].as_u64().unwrap());
        if matches!(body["state"].as_str(), Some("done" | "failed")) {
            return (body, seen);
        }
        tokio::time::sleep(std::time::Duration::from_millis(2)).await;
    }
    panic!("job {id} never finished: {seen:?}");
}
