use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use panel_imaging::ImageBuffer;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// An image stored in configuration documents as base64-encoded PNG.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedImage(pub ImageBuffer);

impl EncodedImage {
    pub fn image(&self) -> &ImageBuffer {
        &self.0
    }

    pub fn to_base64(&self) -> String {
        let png = panel_imaging::io::encode_png(&self.0).expect("buffers are always encodable");
        STANDARD.encode(png)
    }

    pub fn from_base64(text: &str) -> Result<Self, String> {
        let bytes = STANDARD.decode(text.trim()).map_err(|e| format!("invalid base64: {e}"))?;
        panel_imaging::io::decode_png(&bytes)
            .map(EncodedImage)
            .map_err(|e| format!("invalid PNG: {e}"))
    }
}

impl From<ImageBuffer> for EncodedImage {
    fn from(img: ImageBuffer) -> Self {
        EncodedImage(img)
    }
}

impl Serialize for EncodedImage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_base64())
    }
}

impl<'de> Deserialize<'de> for EncodedImage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        EncodedImage::from_base64(&text).map_err(de::Error::custom)
    }
}
