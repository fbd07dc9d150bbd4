use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use goalspot::api::{answer, GoalCard, KbStats, QueryRequest, QueryResponse};
use goalspot::server::router;
use goalspot_core::demo::demo_kb;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

const GOLDEN_PRINT: &str = include_str!("golden/query_print.tsv");

fn app() -> Router {
    router(Arc::new(demo_kb()))
}

async fn send(app: Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    (
        status,
        res.into_body().collect().await.unwrap().to_bytes().to_vec(),
    )
}

fn post(body: impl Into<Body>) -> Request<Body> {
    Request::post("/v1/query")
        .header("content-type", "application/json")
        .body(body.into())
        .unwrap()
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

#[tokio::test]
async fn query_matches_cli_golden() {
    let (status, body) = send(app(), post(r#"{"text":"print","topK":5}"#)).await;
    assert_eq!(status, StatusCode::OK);
    let response: QueryResponse = serde_json::from_slice(&body).unwrap();
    let rendered: String = response
        .results
        .iter()
        .map(|r| {
            format!(
                "{}\t{:.6}\t{}\t{}\n",
                r.rank, r.posterior, r.goal_id, r.title
            )
        })
        .collect();
    assert_eq!(rendered, GOLDEN_PRINT);
    assert_eq!(response.kb.name, "spreadsheet-help");
}

#[tokio::test]
async fn defaults_and_explanations() {
    let (_, body) = send(
        app(),
        post(r#"{"text":"print", "explain": true, "toggles": {"nounVerb": false}}"#),
    )
    .await;
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    assert!(v["results"][0]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["nodeId"] == "print"));
    assert_eq!(v["analysis"][0]["pNoun"], 0.5);
}

#[tokio::test]
async fn malformed_bodies_are_rejected() {
    for body in [
        "not json",
        "{}",
        r#"{"text": 5}"#,
        r#"{"text": "print", "bogus": 1}"#,
        r#"{"text": "print", "topK": 0}"#,
        r#"{"text": "print", "topK": -1}"#,
    ] {
        let (status, bytes) = send(app(), post(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        assert!(v["error"].as_str().is_some_and(|m| !m.is_empty()));
    }
    let long = serde_json::to_string(&QueryRequest::new("x".repeat(4097))).unwrap();
    assert_eq!(send(app(), post(long)).await.0, StatusCode::BAD_REQUEST);
    let limit = serde_json::to_string(&QueryRequest::new("é".repeat(4096))).unwrap();
    assert_eq!(send(app(), post(limit)).await.0, StatusCode::OK);
}

#[tokio::test]
async fn goal_cards() {
    let (status, body) = send(app(), get("/v1/goals/print-sheet")).await;
    assert_eq!(status, StatusCode::OK);
    let card: GoalCard = serde_json::from_slice(&body).unwrap();
    assert_eq!(card.title, "Print a worksheet");
    assert!(card.links.iter().any(|l| l.node_id == "print"));
    let v: Value = serde_json::from_slice(&body).unwrap();
    let print = v["links"]
        .as_array()
        .unwrap()
        .iter()
        .find(|l| l["nodeId"] == "print")
        .unwrap();
    assert_eq!(print["probs"]["form"], "fullSplit");
    assert_eq!(print["probs"]["pVerb"]["bucket"], 12);

    let (status, body) = send(app(), get("/v1/goals/unknown-id")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(String::from_utf8(body).unwrap().contains("unknown-id"));
}

#[tokio::test]
async fn stats_health_and_fallback() {
    let (status, body) = send(app(), get("/v1/kb/stats")).await;
    assert_eq!(status, StatusCode::OK);
    let stats: KbStats = serde_json::from_slice(&body).unwrap();
    assert_eq!((stats.goals, stats.nodes, stats.links), (42, 599, 881));
    assert_eq!(stats.leak, 1e-4);
    assert_eq!(stats.scale.p_max, 0.9);

    let (status, body) = send(app(), get("/v1/health")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        serde_json::from_slice::<Value>(&body).unwrap(),
        serde_json::json!({"ok": true})
    );

    assert_eq!(
        send(app(), get("/v1/nothing")).await.0,
        StatusCode::NOT_FOUND
    );
}

fn results(r: &QueryResponse) -> Vec<(String, f64)> {
    r.results
        .iter()
        .map(|r| (r.goal_id.clone(), r.posterior))
        .collect()
}

#[tokio::test]
async fn cli_and_service_agree() {
    let kb = demo_kb();
    let suite = goalspot_core::demo::demo_suite();
    for (i, case) in suite.cases.iter().enumerate() {
        let mut request = QueryRequest::new(case.query.clone());
        request.top_k = 1 + i % 7;
        let direct = answer(&kb, &request).unwrap();
        let (_, body) = send(app(), post(serde_json::to_vec(&request).unwrap())).await;
        let served: QueryResponse = serde_json::from_slice(&body).unwrap();
        assert_eq!(results(&direct), results(&served));
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_requests_match_serial() {
    let app = app();
    let queries: Vec<String> = goalspot_core::demo::demo_suite()
        .cases
        .into_iter()
        .take(100)
        .map(|c| c.query)
        .collect();
    let mut serial = Vec::new();
    for q in &queries {
        let (_, body) = send(
            app.clone(),
            post(serde_json::to_vec(&QueryRequest::new(q.clone())).unwrap()),
        )
        .await;
        serial.push(results(&serde_json::from_slice(&body).unwrap()));
    }
    let handles: Vec<_> = queries
        .iter()
        .map(|q| {
            let app = app.clone();
            let body = serde_json::to_vec(&QueryRequest::new(q.clone())).unwrap();
            tokio::spawn(async move { send(app, post(body)).await })
        })
        .collect();
    for (handle, expected) in handles.into_iter().zip(&serial) {
        let (status, body) = handle.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        assert_eq!(&results(&serde_json::from_slice(&body).unwrap()), expected);
    }
}
