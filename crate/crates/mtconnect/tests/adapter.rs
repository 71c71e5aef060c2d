mod common;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use chrono::DateTime;
use panel_mtconnect::{follow_adapter, Adapter, AdapterOptions, Agent, ClientOptions, DataLine, UNAVAILABLE};
use tokio::io::{AsyncBufReadExt, AsyncReadExt, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};
use tokio::task::JoinHandle;
use tokio::time::timeout;

fn line(ms: i64, pairs: &[(&str, &str)]) -> DataLine {
    DataLine::new(
        DateTime::from_timestamp_millis(ms).unwrap(),
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
    )
}

async fn start(opts: AdapterOptions) -> (Arc<Adapter>, SocketAddr, JoinHandle<std::io::Result<()>>) {
    let adapter = Adapter::new(opts);
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let task = tokio::spawn(adapter.clone().serve(listener));
    (adapter, addr, task)
}

async fn wait_for(mut cond: impl FnMut() -> bool) {
    timeout(Duration::from_secs(10), async {
        while !cond() {
            tokio::time::sleep(Duration::from_millis(5)).await;
        }
    })
    .await
    .expect("condition not reached in time");
}

async fn read_line(r: &mut (impl AsyncBufReadExt + Unpin)) -> String {
    let mut s = String::new();
    timeout(Duration::from_secs(5), r.read_line(&mut s)).await.unwrap().unwrap();
    s
}

#[tokio::test]
async fn snapshot_then_live_lines() {
    let (adapter, addr, _task) = start(AdapterOptions::default()).await;
    adapter.publish(&line(0, &[("g1", "25"), ("light", "red")])).unwrap();
    adapter.publish(&line(33, &[("light", "green")])).unwrap();

    let mut conn = BufReader::new(TcpStream::connect(addr).await.unwrap());
    assert_eq!(read_line(&mut conn).await, "1970-01-01T00:00:00.000Z|g1|25\n");
    assert_eq!(read_line(&mut conn).await, "1970-01-01T00:00:00.033Z|light|green\n");
    wait_for(|| adapter.connection_count() == 1).await;
    adapter.publish(&line(66, &[("g1", "26")])).unwrap();
    assert_eq!(read_line(&mut conn).await, "1970-01-01T00:00:00.066Z|g1|26\n");
}

#[tokio::test]
async fn ping_gets_pong() {
    let (_adapter, addr, _task) = start(AdapterOptions::default()).await;
    let mut conn = BufReader::new(TcpStream::connect(addr).await.unwrap());
    conn.get_mut().write_all(b"* PING\n").await.unwrap();
    assert_eq!(read_line(&mut conn).await, "* PONG 10000\n");

    let (_adapter, addr, _task) = start(AdapterOptions { heartbeat_ms: 250, ..AdapterOptions::default() }).await;
    let mut conn = BufReader::new(TcpStream::connect(addr).await.unwrap());
    conn.get_mut().write_all(b"* PING\r\n").await.unwrap();
    assert_eq!(read_line(&mut conn).await, "* PONG 250\n");
}

#[tokio::test]
async fn every_agent_gets_the_same_bytes() {
    let (adapter, addr, _task) = start(AdapterOptions::default()).await;
    let mut a = TcpStream::connect(addr).await.unwrap();
    let mut b = TcpStream::connect(addr).await.unwrap();
    wait_for(|| adapter.connection_count() == 2).await;
    let mut expected = String::new();
    for i in 0..200 {
        let l = line(i, &[("g1", &i.to_string()), ("light", "a|b")]);
        expected.push_str(&panel_mtconnect::format_data_line(&l).unwrap());
        adapter.publish(&l).unwrap();
    }
    for conn in [&mut a, &mut b] {
        let mut got = vec![0u8; expected.len()];
        timeout(Duration::from_secs(5), conn.read_exact(&mut got)).await.unwrap().unwrap();
        assert_eq!(String::from_utf8(got).unwrap(), expected);
    }
}

#[tokio::test]
async fn stalled_agent_is_dropped_without_blocking_others() {
    let (adapter, addr, _task) = start(AdapterOptions { backlog: 8, ..AdapterOptions::default() }).await;
    let _stalled = TcpStream::connect(addr).await.unwrap();
    let mut live = BufReader::new(TcpStream::connect(addr).await.unwrap());
    wait_for(|| adapter.connection_count() == 2).await;
    // Lines big enough to fill the socket buffers of the stalled reader.
    let big = "x".repeat(64 * 1024);
    let reader = tokio::spawn(async move {
        let mut n = 0;
        let mut s = String::new();
        while n < 400 {
            s.clear();
            live.read_line(&mut s).await.unwrap();
            n += 1;
        }
        n
    });
    for i in 0..400 {
        adapter.publish(&line(i, &[("blob", &big)])).unwrap();
        if i % 8 == 0 {
            tokio::time::sleep(Duration::from_millis(1)).await;
        }
    }
    assert_eq!(timeout(Duration::from_secs(20), reader).await.unwrap().unwrap(), 400);
    assert_eq!(adapter.slow_disconnects(), 1);
    assert_eq!(adapter.connection_count(), 1);
}

#[tokio::test]
async fn agent_follows_the_adapter_and_marks_loss() {
    let (adapter, addr, task) = start(AdapterOptions::default()).await;
    let agent = Agent::new(common::model(), 1024);
    let opts = ClientOptions { reconnect_min: Duration::from_millis(50), reconnect_max: Duration::from_millis(200) };
    let follower = tokio::spawn(follow_adapter(agent.clone(), "127.0.0.1".into(), addr.port(), opts));
    wait_for(|| agent.is_connected() && adapter.connection_count() == 1).await;

    adapter.publish(&line(0, &[("g1", "25"), ("unknown", "1")])).unwrap();
    adapter.publish(&line(33, &[("g1", "30"), ("light", "a|b")])).unwrap();
    wait_for(|| agent.buffer_snapshot().len() == 3).await;
    let current = agent.buffer_snapshot().current(None).unwrap();
    assert_eq!(current["g1"].value, "30");
    assert_eq!(current["light"].value, "a|b");
    assert_eq!(agent.counters().unknown_items, 1);
    assert!(agent.counters().heartbeats >= 1, "the initial ping is answered");

    // Adapter goes away: observed items flip to UNAVAILABLE.
    task.abort();
    wait_for(|| !agent.is_connected()).await;
    let current = agent.buffer_snapshot().current(None).unwrap();
    assert_eq!(current["g1"].value, UNAVAILABLE);
    assert_eq!(current["light"].value, UNAVAILABLE);
    assert!(!current.contains_key("mode"));

    // And it comes back on the same port: the agent reconnects and the
    // snapshot restores the values.
    let listener = TcpListener::bind(addr).await.unwrap();
    let _task = tokio::spawn(adapter.clone().serve(listener));
    wait_for(|| agent.is_connected()).await;
    wait_for(|| agent.buffer_snapshot().current(None).unwrap()["g1"].value == "30").await;
    follower.abort();
}
