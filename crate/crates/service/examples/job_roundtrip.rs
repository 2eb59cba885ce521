//! Drive the job API in-process: upload contours, start the mask job,
//! poll progress, download the NRRD and score it against itself.

use axum::body::{Body, Bytes};
use axum::http::{header, Method, Request};
use http_body_util::BodyExt;
use segstudio_service::{router, AppState, ServiceConfig};
use tower::ServiceExt;

const META: &str = r#"{"sizes":[20,20,10],"space_origin":[0,0,0],"space_directions":[[1,0,0],[0,1,0],[0,0,1]],"space":"right-anterior-superior"}"#;
const CONTOURS: &str = "# vtk DataFile Version 3.0
square mode=index_space
ASCII
DATASET POLYDATA
POINTS 4 float
2 2 5
12 2 5
12 12 5
2 12 5
POLYGONS 1 5
4 0 1 2 3
";

fn multipart(uri: &str, parts: &[(&str, &[u8])]) -> Request<Body> {
    let mut body = Vec::new();
    for (name, data) in parts {
        body.extend(
            format!("--XX\r\nContent-Disposition: form-data; name=\"{name}\"\r\n\r\n").bytes(),
        );
        body.extend_from_slice(data);
        body.extend(b"\r\n");
    }
    body.extend(b"--XX--\r\n");
    Request::builder()
        .method(Method::POST)
        .uri(uri)
        .header(header::CONTENT_TYPE, "multipart/form-data; boundary=XX")
        .body(Body::from(body))
        .unwrap()
}

async fn call(app: &axum::Router, req: Request<Body>) -> Bytes {
    let resp = app.clone().oneshot(req).await.unwrap();
    println!("<- {}", resp.status());
    resp.into_body().collect().await.unwrap().to_bytes()
}

#[tokio::main]
async fn main() {
    let workdir = std::env::temp_dir().join("segstudio-example-jobs");
    let state = AppState::new(ServiceConfig {
        workdir,
        ..ServiceConfig::default()
    })
    .unwrap();
    let app = router(state);

    let created = call(
        &app,
        multipart(
            "/api/jobs",
            &[("contours", CONTOURS.as_bytes()), ("meta", META.as_bytes())],
        ),
    )
    .await;
    let id = serde_json::from_slice::<serde_json::Value>(&created).unwrap()["job_id"]
        .as_str()
        .unwrap()
        .to_string();
    println!("job {id}");

    let start = Request::builder()
        .method(Method::POST)
        .uri(format!("/api/jobs/{id}/mask"))
        .body(Body::empty());
    call(&app, start.unwrap()).await;

    loop {
        let req = Request::builder()
            .uri(format!("/api/jobs/{id}/progress"))
            .body(Body::empty())
            .unwrap();
        let status: serde_json::Value = serde_json::from_slice(&call(&app, req).await).unwrap();
        println!("{status}");
        if status["state"] != "running" && status["state"] != "created" {
            break;
        }
        tokio::time::sleep(std::time::Duration::from_millis(5)).await;
    }

    let req = Request::builder()
        .uri(format!("/api/jobs/{id}/mask"))
        .body(Body::empty())
        .unwrap();
    let mask = call(&app, req).await;
    println!("mask: {} bytes", mask.len());

    let report = call(
        &app,
        multipart("/api/metrics", &[("a", &mask), ("b", &mask)]),
    )
    .await;
    println!("{}", String::from_utf8_lossy(&report));
}
